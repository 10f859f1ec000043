"""Exact linear algebra over the fraction field of a chart.

Matrices are lists of rows of :class:`Scalar`.  Generic rank uses
fraction-free (Bareiss) elimination; pointwise rank evaluates at a rational
point and eliminates over the Gaussian rationals, which gives an
independent route for cross-checks.
"""
from __future__ import annotations

from typing import Sequence

from sympy.polys.domains import QQ_I

from .errors import InconsistentSystem, SingularMatrix
from .scalars import Chart, SamplePoint, Scalar

Matrix = list[list[Scalar]]


def _weight(s: Scalar) -> tuple[int, int, int]:
    n_terms = len(s.pn.items()) + len(s.qn.items()) + len(s.den.items())
    return (0 if s.is_const() else 1, s.degree(), n_terms)


def _pick(rows: Matrix, start: int, col: int) -> int | None:
    best, best_w = None, None
    for r in range(start, len(rows)):
        e = rows[r][col]
        if e.is_zero():
            continue
        w = _weight(e)
        if best is None or w < best_w:
            best, best_w = r, w
            if w[0] == 0:
                break
    return best


def echelon(M: Matrix) -> tuple[Matrix, list[int], list[int]]:
    """Fraction-free row echelon form.

    Returns ``(U, pivot_columns, row_order)``; ``row_order[:rank]`` indexes
    original rows that form a basis of the row space.
    """
    A = [list(r) for r in M]
    order = list(range(len(A)))
    if not A:
        return A, [], order
    n = len(A[0])
    chart = A[0][0].chart if n else None
    prev = chart.one if chart is not None else None
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= len(A):
            break
        p = _pick(A, r, c)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        order[r], order[p] = order[p], order[r]
        piv = A[r][c]
        for i in range(r + 1, len(A)):
            a_ic = A[i][c]
            if a_ic.is_zero():
                if not prev == 1 or not piv == 1:
                    A[i] = A[i][:c] + [(piv * A[i][j]) / prev for j in range(c, n)]
                continue
            row = A[i][:c] + [chart.zero]
            for j in range(c + 1, n):
                row.append((piv * A[i][j] - a_ic * A[r][j]) / prev)
            A[i] = row
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots, order


def rank(M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(echelon(M)[1])


def independent_rows(M: Matrix) -> list[int]:
    """Indices of a maximal generically independent subset of rows, in order."""
    if not M or not M[0]:
        return []
    _, piv, order = echelon(M)
    return sorted(order[: len(piv)])


def det(M: Matrix) -> Scalar:
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    U, piv, order = echelon(M)
    if len(piv) < n:
        return M[0][0].chart.zero
    sign = _perm_sign(order)
    return U[n - 1][n - 1] if sign > 0 else -U[n - 1][n - 1]


def _perm_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for k in range(len(order)):
        if seen[k]:
            continue
        length = 0
        j = k
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def rref(M: Matrix, column_order: Sequence[int] | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over the fraction field."""
    A = [list(r) for r in M]
    if not A:
        return A, []
    n = len(A[0])
    cols = list(column_order) if column_order is not None else list(range(n))
    pivots: list[int] = []
    r = 0
    for c in cols:
        if r >= len(A):
            break
        p = _pick(A, r, c)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [e * inv for e in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def kernel(M: Matrix, chart: Chart | None = None, ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of the right null space ``{v : M v = 0}``."""
    if not M:
        if chart is None or ncols is None:
            raise ValueError("empty matrix needs chart and column count")
        return [[chart.one if i == k else chart.zero for i in range(ncols)] for k in range(ncols)]
    chart = M[0][0].chart
    n = len(M[0])
    R, piv = rref(M)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [chart.zero] * n
        v[f] = chart.one
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Sequence[Scalar], column_order: Sequence[int] | None = None) -> list[Scalar]:
    """A particular solution of ``A x = b`` (free variables set to zero)."""
    chart = b[0].chart
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    order = list(column_order) if column_order is not None else list(range(n))
    R, piv = rref(aug, order + [n])
    if n in piv:
        raise InconsistentSystem("right-hand side is not in the column span")
    x = [chart.zero] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def invert(A: Matrix) -> Matrix:
    n = len(A)
    chart = A[0][0].chart
    aug = [list(row) + [chart.one if i == k else chart.zero for k in range(n)]
           for i, row in enumerate(A)]
    R, piv = rref(aug, list(range(n)))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is not invertible over the fraction field")
    return [row[n:] for row in R]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    chart = A[0][0].chart
    cols = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in cols:
            acc = chart.zero
            for a, b in zip(row, col):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(A: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    chart = v[0].chart
    out = []
    for row in A:
        acc = chart.zero
        for a, b in zip(row, v):
            if not a.is_zero() and not b.is_zero():
                acc = acc + a * b
        out.append(acc)
    return out


def identity(chart: Chart, n: int) -> Matrix:
    return [[chart.one if i == k else chart.zero for k in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def is_zero_matrix(A: Matrix) -> bool:
    return all(e.is_zero() for row in A for e in row)


# ---- pointwise route ------------------------------------------------------

def evaluate_matrix(M: Matrix, point: SamplePoint) -> list[list]:
    return [[e.evaluate(point) for e in row] for row in M]


def numeric_rank(rows: list[list]) -> int:
    """Rank of a matrix over the Gaussian rationals by plain elimination."""
    A = [list(r) for r in rows]
    if not A:
        return 0
    n = len(A[0])
    zero = QQ_I(0, 0)
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c] != zero), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = QQ_I(1, 0) / A[r][c]
        for i in range(r + 1, len(A)):
            if A[i][c] != zero:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def rank_at(M: Matrix, point: SamplePoint) -> int:
    return numeric_rank(evaluate_matrix(M, point))
