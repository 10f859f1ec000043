"""Cartan calculus on a chart.

Differential forms and multivector fields share one antisymmetric storage:
a dict from strictly increasing index tuples to nonzero scalars.
A (1,1)-tensor is stored as the matrix ``M`` with ``Phi(d_j) = sum_i M[i][j] d_i``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .errors import ChartMismatch
from .scalars import Chart, Scalar


def merge_sign(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted union for ``e_a ^ e_b``; ``None`` if indices repeat."""
    if set(a) & set(b):
        return None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


class AntiTensor:
    kind = "anti"

    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart: Chart, degree: int, comps: dict[tuple[int, ...], Scalar] | None = None):
        self.chart = chart
        self.degree = degree
        self.comps = {k: v for k, v in (comps or {}).items() if not v.is_zero()}

    def _check(self, other: "AntiTensor") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart is not self.chart:
            raise ChartMismatch(f"{self.chart} vs {other.chart}")

    def _new(self, degree: int, comps) -> "AntiTensor":
        return type(self)(self.chart, degree, comps)

    def __add__(self, other):
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise ValueError("adding tensors of different degree")
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return self._new(self.degree, out)

    def __neg__(self):
        return self._new(self.degree, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "AntiTensor":
        if not isinstance(f, Scalar):
            f = self.chart.const(f)
        if f.is_zero():
            return self._new(self.degree, {})
        return self._new(self.degree, {k: f * v for k, v in self.comps.items()})

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.chart is other.chart
        return self.chart is other.chart and self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((type(self).__name__, self.chart.names, self.degree, frozenset(self.comps.items())))

    def get(self, idx: Sequence[int]) -> Scalar:
        """Component at an arbitrary (unsorted) index tuple, with sign."""
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            return self.chart.zero
        order = sorted(range(len(idx)), key=lambda k: idx[k])
        sign = _perm_parity(order)
        v = self.comps.get(tuple(sorted(idx)))
        if v is None:
            return self.chart.zero
        return v if sign > 0 else -v

    def wedge(self, other: "AntiTensor") -> "AntiTensor":
        self._check(other)
        out: dict[tuple[int, ...], Scalar] = {}
        for a, va in self.comps.items():
            for b, vb in other.comps.items():
                m = merge_sign(a, b)
                if m is None:
                    continue
                s, k = m
                term = va * vb if s > 0 else -(va * vb)
                out[k] = out[k] + term if k in out else term
        return self._new(self.degree + other.degree, out)

    def __xor__(self, other):
        return self.wedge(other)

    def lift(self, chart: Chart) -> "AntiTensor":
        """Re-read on a larger chart, extending by zero in the new directions."""
        pos = [chart.index(n) for n in self.chart.names]
        out = {}
        for k, v in self.comps.items():
            nk = tuple(pos[i] for i in k)
            m = merge_sign((), tuple(sorted(nk)))
            order = sorted(range(len(nk)), key=lambda t: nk[t])
            sign = _perm_parity(order)
            vv = v.lift(chart)
            out[m[1]] = vv if sign > 0 else -vv
        return type(self)(chart, self.degree, out)

    def map_scalars(self, fn, chart: Chart | None = None) -> "AntiTensor":
        return type(self)(chart or self.chart, self.degree, {k: fn(v) for k, v in self.comps.items()})

    def conj(self) -> "AntiTensor":
        return self.map_scalars(lambda s: s.conj())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({render_anti(self)})"


def _perm_parity(order: Sequence[int]) -> int:
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return -1 if inv % 2 else 1


class Form(AntiTensor):
    kind = "form"
    __slots__ = ()


class Multivector(AntiTensor):
    kind = "multivector"
    __slots__ = ()


# ---- constructors ---------------------------------------------------------

def scalar_form(f: Scalar) -> Form:
    return Form(f.chart, 0, {(): f})


def scalar_multivector(f: Scalar) -> Multivector:
    return Multivector(f.chart, 0, {(): f})


def dcoord(chart: Chart, name: str) -> Form:
    return Form(chart, 1, {(chart.index(name),): chart.one})


def dcoords(chart: Chart, *names: str) -> Form:
    out = Form(chart, 0, {(): chart.one})
    for n in names:
        out = out.wedge(dcoord(chart, n))
    return out


def partial(chart: Chart, name: str) -> Multivector:
    return Multivector(chart, 1, {(chart.index(name),): chart.one})


def vector(chart: Chart, comps: Sequence[Scalar]) -> Multivector:
    return Multivector(chart, 1, {(k,): v for k, v in enumerate(comps)})


def one_form(chart: Chart, comps: Sequence[Scalar]) -> Form:
    return Form(chart, 1, {(k,): v for k, v in enumerate(comps)})


def components(t: AntiTensor) -> list[Scalar]:
    """Dense component list of a degree-one tensor."""
    if t.is_zero():
        return [t.chart.zero] * t.chart.dim
    if t.degree != 1:
        raise ValueError("components() needs a degree-one tensor")
    return [t.comps.get((k,), t.chart.zero) for k in range(t.chart.dim)]


def zero_form(chart: Chart, degree: int) -> Form:
    return Form(chart, degree, {})


def zero_multivector(chart: Chart, degree: int) -> Multivector:
    return Multivector(chart, degree, {})


def function_of(t: AntiTensor) -> Scalar:
    if t.degree != 0 and not t.is_zero():
        raise ValueError("not a degree-zero tensor")
    return t.comps.get((), t.chart.zero)


# ---- exterior calculus ----------------------------------------------------

def d(w: Form) -> Form:
    chart = w.chart
    out: dict[tuple[int, ...], Scalar] = {}
    for idx, f in w.comps.items():
        for k, name in enumerate(chart.names):
            if k in idx:
                continue
            df = f.diff(name)
            if df.is_zero():
                continue
            s, key = merge_sign((k,), idx)
            term = df if s > 0 else -df
            out[key] = out[key] + term if key in out else term
    return Form(chart, w.degree + 1, out)


def _contract(vec_comps: dict[tuple[int, ...], Scalar], t: AntiTensor) -> dict:
    out: dict[tuple[int, ...], Scalar] = {}
    for idx, f in t.comps.items():
        for r, k in enumerate(idx):
            a = vec_comps.get((k,))
            if a is None:
                continue
            key = idx[:r] + idx[r + 1:]
            term = a * f if r % 2 == 0 else -(a * f)
            out[key] = out[key] + term if key in out else term
    return out


def interior(X: Multivector, w: Form) -> Form:
    """Insert a vector field into the first slot of a form."""
    if X.chart is not w.chart:
        raise ChartMismatch(f"{X.chart} vs {w.chart}")
    if X.degree != 1 and not X.is_zero():
        raise ValueError("interior product needs a vector field")
    if w.degree == 0:
        return Form(w.chart, -1, {})
    return Form(w.chart, w.degree - 1, _contract(X.comps, w))


def contract(eta: Form, P: Multivector) -> Multivector:
    """Insert a one-form into the first slot of a multivector: ``P(eta, -)``."""
    if eta.chart is not P.chart:
        raise ChartMismatch(f"{eta.chart} vs {P.chart}")
    if P.degree == 0:
        return Multivector(P.chart, -1, {})
    return Multivector(P.chart, P.degree - 1, _contract(eta.comps, P))


def pair(eta: Form, X: Multivector) -> Scalar:
    """``eta(X)`` for a one-form and a vector field."""
    acc = eta.chart.zero
    for (k,), v in eta.comps.items():
        x = X.comps.get((k,))
        if x is not None:
            acc = acc + v * x
    return acc


def evaluate_form(w: Form, *vectors: Multivector) -> Scalar:
    out = w
    for X in vectors:
        out = interior(X, out)
    return function_of(out)


def evaluate_multivector(P: Multivector, *forms: Form) -> Scalar:
    out = P
    for a in forms:
        out = contract(a, out)
    return function_of(out)


def sharp(P: Multivector, eta: Form) -> Multivector:
    """Bivector sharp map ``eta -> P(eta, -)``."""
    return contract(eta, P)


def flat(w: Form, X: Multivector) -> Form:
    """Two-form flat map ``X -> iota_X w``."""
    return interior(X, w)


def vector_apply(X: Multivector, f: Scalar) -> Scalar:
    acc = f.chart.zero
    for (k,), v in X.comps.items():
        df = f.diff(f.chart.names[k])
        if not df.is_zero():
            acc = acc + v * df
    return acc


def lie_bracket(X: Multivector, Y: Multivector) -> Multivector:
    chart = X.chart
    if Y.chart is not chart:
        raise ChartMismatch(f"{X.chart} vs {Y.chart}")
    xs, ys = components(X), components(Y)
    out = []
    for k in range(chart.dim):
        out.append(vector_apply(X, ys[k]) - vector_apply(Y, xs[k]))
    return vector(chart, out)


def lie_form(X: Multivector, w: Form) -> Form:
    """Lie derivative of a form by Cartan's formula."""
    if w.degree == 0:
        return scalar_form(vector_apply(X, function_of(w))) if not w.is_zero() else w
    a = interior(X, d(w))
    b = d(interior(X, w))
    return a + b


def lie_multivector(X: Multivector, P: Multivector) -> Multivector:
    """Lie derivative of a multivector via the coordinate transport formula."""
    chart = X.chart
    xs = components(X)
    out: dict[tuple[int, ...], Scalar] = {}

    def add(key, val):
        if not val.is_zero():
            out[key] = out[key] + val if key in out else val

    for idx, f in P.comps.items():
        add(idx, vector_apply(X, f))
        for r, ir in enumerate(idx):
            for k in range(chart.dim):
                dx = xs[k].diff(chart.names[ir])
                if dx.is_zero():
                    continue
                new = idx[:r] + (k,) + idx[r + 1:]
                if len(set(new)) != len(new):
                    continue
                order = sorted(range(len(new)), key=lambda t: new[t])
                sign = _perm_parity(order)
                term = f * dx
                add(tuple(sorted(new)), -term if sign > 0 else term)
    return Multivector(chart, P.degree, out)


def lie_derivative(X: Multivector, T):
    """Lie derivative of a form, multivector or (1,1)-tensor."""
    if isinstance(T, Form):
        return lie_form(X, T)
    if isinstance(T, Multivector):
        return lie_multivector(X, T)
    if isinstance(T, Endo):
        return lie_endo(X, T)
    if isinstance(T, Scalar):
        return vector_apply(X, T)
    raise TypeError(f"no Lie derivative for {type(T).__name__}")


# ---- Schouten-Nijenhuis bracket -------------------------------------------

def _right_theta_derivative(P: Multivector, i: int) -> dict[tuple[int, ...], Scalar]:
    out = {}
    for idx, f in P.comps.items():
        if i not in idx:
            continue
        r = idx.index(i)
        moves = len(idx) - 1 - r
        out[idx[:r] + idx[r + 1:]] = f if moves % 2 == 0 else -f
    return out


def _wedge_dicts(a: dict, b: dict, chart: Chart, out: dict, sign: int) -> None:
    for ia, va in a.items():
        for ib, vb in b.items():
            m = merge_sign(ia, ib)
            if m is None:
                continue
            s, key = m
            term = va * vb
            if s * sign < 0:
                term = -term
            out[key] = out[key] + term if key in out else term


def schouten(P: Multivector, Q: Multivector) -> Multivector:
    """Schouten-Nijenhuis bracket, extending the Lie bracket of vector fields.

    In odd coordinates ``theta_i`` for ``d_i``:
    ``[P, Q] = dP/dtheta_i . dQ/dx^i - (-1)^{(p-1)(q-1)} dQ/dtheta_i . dP/dx^i``
    with right derivatives in ``theta``.
    """
    chart = P.chart
    if Q.chart is not chart:
        raise ChartMismatch(f"{P.chart} vs {Q.chart}")
    p, q = P.degree, Q.degree
    out: dict[tuple[int, ...], Scalar] = {}
    sgn = -1 if ((p - 1) * (q - 1)) % 2 else 1
    for i, name in enumerate(chart.names):
        dP = _right_theta_derivative(P, i)
        dQ = _right_theta_derivative(Q, i)
        if dP:
            xQ = {k: v.diff(name) for k, v in Q.comps.items()}
            _wedge_dicts(dP, {k: v for k, v in xQ.items() if not v.is_zero()}, chart, out, 1)
        if dQ:
            xP = {k: v.diff(name) for k, v in P.comps.items()}
            _wedge_dicts(dQ, {k: v for k, v in xP.items() if not v.is_zero()}, chart, out, -sgn)
    return Multivector(chart, p + q - 1, out)


# ---- (1,1)-tensors ----------------------------------------------------------

class Endo:
    """Endomorphism of the tangent bundle, ``Phi(d_j) = sum_i M[i][j] d_i``."""

    __slots__ = ("chart", "M")

    def __init__(self, chart: Chart, M: Sequence[Sequence[Scalar]]):
        self.chart = chart
        self.M = [list(r) for r in M]

    @classmethod
    def identity(cls, chart: Chart) -> "Endo":
        n = chart.dim
        return cls(chart, [[chart.one if i == j else chart.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, chart: Chart) -> "Endo":
        n = chart.dim
        return cls(chart, [[chart.zero] * n for _ in range(n)])

    @classmethod
    def tensor(cls, eta: Form, X: Multivector) -> "Endo":
        """``eta (x) X``: the map ``Y -> eta(Y) X``."""
        chart = eta.chart
        e, x = components(eta), components(X)
        return cls(chart, [[x[i] * e[j] for j in range(chart.dim)] for i in range(chart.dim)])

    def apply(self, X: Multivector) -> Multivector:
        xs = components(X)
        n = self.chart.dim
        out = []
        for i in range(n):
            acc = self.chart.zero
            for j in range(n):
                if not self.M[i][j].is_zero() and not xs[j].is_zero():
                    acc = acc + self.M[i][j] * xs[j]
            out.append(acc)
        return vector(self.chart, out)

    def __call__(self, X: Multivector) -> Multivector:
        return self.apply(X)

    def dual_apply(self, eta: Form) -> Form:
        """``eta o Phi``."""
        es = components(eta)
        n = self.chart.dim
        out = []
        for j in range(n):
            acc = self.chart.zero
            for i in range(n):
                if not self.M[i][j].is_zero() and not es[i].is_zero():
                    acc = acc + es[i] * self.M[i][j]
            out.append(acc)
        return one_form(self.chart, out)

    def compose(self, other: "Endo") -> "Endo":
        n = self.chart.dim
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.chart.zero
                for k in range(n):
                    a, b = self.M[i][k], other.M[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Endo(self.chart, out)

    def __matmul__(self, other: "Endo") -> "Endo":
        return self.compose(other)

    def __add__(self, other: "Endo") -> "Endo":
        return Endo(self.chart, [[a + b for a, b in zip(r, s)] for r, s in zip(self.M, other.M)])

    def __sub__(self, other: "Endo") -> "Endo":
        return Endo(self.chart, [[a - b for a, b in zip(r, s)] for r, s in zip(self.M, other.M)])

    def __neg__(self) -> "Endo":
        return Endo(self.chart, [[-a for a in r] for r in self.M])

    def scale(self, f: Scalar) -> "Endo":
        return Endo(self.chart, [[f * a for a in r] for r in self.M])

    def __eq__(self, other) -> bool:
        return isinstance(other, Endo) and self.chart is other.chart and self.M == other.M

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.M for a in r)

    def column(self, j: int) -> Multivector:
        return vector(self.chart, [self.M[i][j] for i in range(self.chart.dim)])

    def __repr__(self) -> str:
        return f"Endo({self.M})"


def lie_endo(X: Multivector, Phi: Endo) -> Endo:
    chart = X.chart
    cols = []
    for j, name in enumerate(chart.names):
        dj = partial(chart, name)
        v = lie_bracket(X, Phi.apply(dj)) - Phi.apply(lie_bracket(X, dj))
        cols.append(components(v))
    return Endo(chart, [[cols[j][i] for j in range(chart.dim)] for i in range(chart.dim)])


def nijenhuis11(Phi: Endo) -> dict[tuple[int, int], Multivector]:
    """``N(d_i, d_j)`` for ``i < j``; only nonzero entries are kept."""
    chart = Phi.chart
    Phi2 = Phi.compose(Phi)
    basis = [partial(chart, n) for n in chart.names]
    images = [Phi.apply(b) for b in basis]
    out = {}
    for i, j in combinations(range(chart.dim), 2):
        X, Y = basis[i], basis[j]
        PX, PY = images[i], images[j]
        v = (lie_bracket(PX, PY)
             - Phi.apply(lie_bracket(PX, Y))
             - Phi.apply(lie_bracket(X, PY))
             + Phi2.apply(lie_bracket(X, Y)))
        if not v.is_zero():
            out[(i, j)] = v
    return out


def nijenhuis_on(Phi: Endo, X: Multivector, Y: Multivector) -> Multivector:
    Phi2 = Phi.compose(Phi)
    PX, PY = Phi.apply(X), Phi.apply(Y)
    return (lie_bracket(PX, PY) - Phi.apply(lie_bracket(PX, Y))
            - Phi.apply(lie_bracket(X, PY)) + Phi2.apply(lie_bracket(X, Y)))


# ---- printing -----------------------------------------------------------------

def _paren(s: str) -> str:
    simple = all(ch.isalnum() or ch in "_^*/" for ch in s) and not s.startswith("-")
    return s if simple else f"({s})"


def render_anti(t: AntiTensor) -> str:
    from .scalars import render

    if t.is_zero():
        return "0"
    names = t.chart.names
    prefix = "d" if isinstance(t, Form) else "@"
    terms = []
    for idx in sorted(t.comps):
        coef = render(t.comps[idx])
        basis = "^".join(prefix + names[k] for k in idx)
        terms.append(term_text(coef, basis))
    return join_terms(terms)


def term_text(coef: str, basis: str) -> str:
    """Render ``coef * basis`` with unit coefficients elided."""
    if not basis:
        return coef
    if coef == "1":
        return basis
    if coef == "-1":
        return "-" + basis
    if coef.startswith("-") and _paren(coef[1:]) == coef[1:]:
        return f"-{coef[1:]}*{basis}"
    return f"{_paren(coef)}*{basis}"


def join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    return out


def forms_equal_up_to_chart(a: Form, b: Form) -> bool:
    return a.chart is b.chart and (a - b).is_zero()


def basis_forms(chart: Chart, degree: int) -> Iterable[tuple[tuple[int, ...], Form]]:
    for idx in combinations(range(chart.dim), degree):
        yield idx, Form(chart, degree, {idx: chart.one})
