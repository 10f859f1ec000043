import random

import pytest
from hypothesis import given, strategies as st

from jacobigeom import linalg as LA
from jacobigeom.atiyah import atiyah_flat_matrix
from jacobigeom.errors import InconsistentSystem, SingularMatrix
from jacobigeom.randgen import rand_poly
from jacobigeom.scalars import Chart
from jacobigeom.structures.gallery import omega_can

XY = Chart(("x", "y"))


def _rand_matrix(rng, rows, cols, degree=1):
    return [[rand_poly(XY, rng, degree, 2) for _ in range(cols)] for _ in range(rows)]


def test_omega_can_flat_has_full_rank():
    M = atiyah_flat_matrix(omega_can(1))
    assert len(M) == 4
    assert LA.rank(M) == 4
    for pt in M[0][0].chart.default_samples():
        assert LA.rank_at(M, pt) == 4


def test_kernel_of_zero_matrix():
    Z = [[XY.zero, XY.zero], [XY.zero, XY.zero]]
    ker = LA.kernel(Z)
    assert len(ker) == 2
    assert LA.rank(ker) == 2


def test_invert_identity():
    I = LA.identity(XY, 3)
    assert LA.invert(I) == I


def test_singular_and_inconsistent():
    x, y = XY.coords()
    M = [[x, y], [2 * x, 2 * y]]
    assert LA.rank(M) == 1
    assert LA.det(M).is_zero()
    with pytest.raises(SingularMatrix):
        LA.invert(M)
    with pytest.raises(InconsistentSystem):
        LA.solve(M, [XY.one, XY.zero])


def test_kernel_annihilates():
    x, y = XY.coords()
    M = [[x, y, XY.one], [XY.one, x, y]]
    ker = LA.kernel(M)
    assert len(ker) == 1
    assert all(e.is_zero() for e in LA.matvec(M, ker[0]))


@given(st.integers(0, 10 ** 6))
def test_invert_twice_is_identity(seed):
    rng = random.Random(seed)
    M = _rand_matrix(rng, 3, 3)
    if LA.det(M).is_zero():
        return
    Mi = LA.invert(M)
    assert LA.matmul(M, Mi) == LA.identity(XY, 3)
    assert LA.invert(Mi) == M


@given(st.integers(0, 10 ** 6))
def test_solve_residual(seed):
    rng = random.Random(seed)
    A = _rand_matrix(rng, 3, 4)
    xs = [rand_poly(XY, rng, 1, 2) for _ in range(4)]
    b = LA.matvec(A, xs)
    sol = LA.solve(A, b)
    assert LA.matvec(A, sol) == b


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_symbolic_rank_matches_pointwise(seed, k):
    rng = random.Random(seed)
    # product of 4xk and kx4 factors: rank at most k
    M = LA.matmul(_rand_matrix(rng, 4, k), _rand_matrix(rng, k, 4))
    r = LA.rank(M)
    assert r <= k
    pts = XY.default_samples(seed=seed, count=4)
    pointwise = [LA.rank_at(M, p) for p in pts]
    assert max(pointwise) <= r
    # a rational point where the generic rank drops is a zero of a minor;
    # several random points cannot all hit it
    assert max(pointwise) == r
