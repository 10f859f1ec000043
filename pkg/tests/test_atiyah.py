import random

import pytest
from hypothesis import given, strategies as st

from jacobigeom import cartan as C
from jacobigeom.atiyah import (AtiyahForm, Derivation, atiyah_d, atiyah_interior, atiyah_lie,
                               connection_ops, deriv_apply, deriv_bracket, euler_field,
                               extended_chart, homogenize, homogenize_endo, j1, jet, jet_pair)
from jacobigeom.errors import CoordinateClash
from jacobigeom.randgen import rand_atiyah, rand_derivation, rand_form, rand_poly
from jacobigeom.scalars import Chart
from jacobigeom.structures import gallery as G

XPU = Chart(("x", "p", "u"))
CHARTS = [Chart(("x",)), Chart(("x", "p")), XPU, Chart(("x", "p", "u", "v"))]


def D(name, f=0):
    return Derivation(C.partial(XPU, name), XPU.const(f) if not hasattr(f, "chart") else f)


def test_deriv_apply():
    x, p, u = XPU.coords()
    assert deriv_apply(D("u", 1), u) == 1 + u
    assert deriv_apply(Derivation.one(XPU), x * p + u) == x * p + u
    Dx = Derivation(C.partial(XPU, "x").scale(p), x)
    assert deriv_apply(Dx, x * p) == p ** 2 + x ** 2 * p


def test_deriv_bracket():
    p = XPU.coord("p")
    br = deriv_bracket(D("x", p), D("p"))
    assert br.X.is_zero() and br.f == -1
    assert deriv_bracket(Derivation.one(XPU), D("x", p)).is_zero()
    assert deriv_bracket(D("x"), D("p")).is_zero()


def test_jet_pair():
    u = XPU.coord("u")
    assert jet_pair(j1(u), D("u", 1)) == 1 + u
    assert jet_pair(AtiyahForm.j(XPU), Derivation.one(XPU)) == 1
    psi = jet(C.dcoord(XPU, "p"), XPU.const(2))
    assert jet_pair(psi, D("x", 1)) == 2


def test_atiyah_d_examples():
    assert atiyah_d(AtiyahForm.j(XPU)).is_zero()
    x, p, u = XPU.coords()
    assert atiyah_d(j1(x * p + u ** 2)).is_zero()
    th = G.theta_can(1)
    expected = AtiyahForm.make(C.dcoords(XPU, "x", "p"), -th)
    assert atiyah_d(AtiyahForm.embed(th)) == expected
    assert G.omega_can(1) == expected


def test_atiyah_interior_examples():
    w = G.omega_can(1)
    assert atiyah_interior(Derivation.one(XPU), w) == AtiyahForm.embed(G.theta_can(1))
    p = XPU.coord("p")
    assert atiyah_interior(D("x"), w) == jet(C.dcoord(XPU, "p"), p)
    Dx = D("x", p)
    assert atiyah_interior(Dx, atiyah_interior(Dx, w)).is_zero()


def test_atiyah_lie_examples():
    rng = random.Random(5)
    w0 = rand_form(XPU, 2, rng)
    a = AtiyahForm.embed(w0)
    assert atiyah_lie(Derivation.one(XPU), a) == a
    assert atiyah_lie(D("u"), G.omega_can(1)).is_zero()


def test_connections():
    ch = Chart(("x", "y"))
    x, y = ch.coords()
    flat0 = connection_ops(C.zero_form(ch, 1))
    assert flat0["flat"]
    w = C.dcoord(ch, "y").scale(x * y)
    assert flat0["d_nabla"](w) == C.d(w)
    assert connection_ops(C.d(C.scalar_form(x ** 2 * y)))["flat"]
    bad = connection_ops(C.dcoord(ch, "y").scale(x))
    assert not bad["flat"]
    assert bad["curvature"] == C.dcoords(ch, "x", "y")


def test_homogenize_examples():
    ext = extended_chart(XPU)
    assert homogenize(Derivation.one(XPU)) == euler_field(ext)
    assert homogenize(D("x")) == C.partial(ext, "x")
    with pytest.raises(CoordinateClash):
        extended_chart(ext)


def test_homogenized_phi_can_is_integrable():
    for n in (1, 2):
        ch = G.cylinder_chart(n)
        assert not C.nijenhuis11(homogenize_endo(G.phi_can(n), ch))


# ---- properties ------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)
charts = st.sampled_from(CHARTS)


def _atiyah(ch, seed, k, degree=2):
    return rand_atiyah(ch, min(k, ch.dim + 1), random.Random(seed), degree)


@given(seeds, charts, st.integers(0, 3))
def test_d_D_squared_is_zero(seed, ch, k):
    w = _atiyah(ch, seed, k)
    assert atiyah_d(atiyah_d(w)).is_zero()


@given(seeds, charts, st.integers(1, 3))
def test_one_is_a_contracting_homotopy(seed, ch, k):
    w = _atiyah(ch, seed, k)
    one = Derivation.one(ch)
    homotopy = atiyah_interior(one, atiyah_d(w)) + atiyah_d(atiyah_interior(one, w))
    assert homotopy == w
    assert atiyah_lie(one, w) == w


@given(seeds, charts, st.integers(1, 3))
def test_cartan_formula_on_atiyah_forms(seed, ch, k):
    rng = random.Random(seed)
    w = _atiyah(ch, seed, k)
    Dl = rand_derivation(ch, rng)
    rhs = atiyah_interior(Dl, atiyah_d(w)) + atiyah_d(atiyah_interior(Dl, w))
    assert atiyah_lie(Dl, w) == rhs
    assert atiyah_lie(Dl, atiyah_d(w)) == atiyah_d(atiyah_lie(Dl, w))


@given(seeds, charts, st.integers(0, 2))
def test_embedded_forms(seed, ch, k):
    a = rand_form(ch, min(k, ch.dim), random.Random(seed), 2)
    assert atiyah_d(AtiyahForm.embed(a)).w0 == C.d(a)


@given(seeds, charts)
def test_jet_pair_of_prolongation(seed, ch):
    rng = random.Random(seed)
    lam, Dl = rand_poly(ch, rng, 3, complex_=True), rand_derivation(ch, rng)
    assert jet_pair(j1(lam), Dl) == deriv_apply(Dl, lam)


@given(seeds, charts)
def test_homogenize_is_a_morphism(seed, ch):
    rng = random.Random(seed)
    D1, D2 = rand_derivation(ch, rng), rand_derivation(ch, rng)
    assert homogenize(deriv_bracket(D1, D2)) == C.lie_bracket(homogenize(D1), homogenize(D2))
