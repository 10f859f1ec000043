import random

from hypothesis import given, strategies as st

from jacobigeom import cartan as C
from jacobigeom.cartan import Endo
from jacobigeom.randgen import rand_form, rand_poly
from jacobigeom.scalars import Chart
from jacobigeom.structures import gallery as G

XPU = Chart(("x", "p", "u"))
UXY = Chart(("u", "x", "y"))
XP = Chart(("x", "p"))
CHARTS = [Chart(("x",)), XP, XPU, Chart(("x", "p", "u", "v")), Chart(("x", "p", "u", "v", "w"))]


def rand_vector(ch, rng, degree=2):
    return C.vector(ch, [rand_poly(ch, rng, degree) for _ in ch.names])


def rand_multivector(ch, k, rng, degree=1):
    out = C.zero_multivector(ch, k)
    for _ in range(2):
        t = C.scalar_multivector(rand_poly(ch, rng, degree)) if k == 0 else rand_vector(ch, rng, degree)
        for _ in range(k - 1):
            t = t.wedge(rand_vector(ch, rng, degree))
        out = out + t
    return out


def rand_endo(ch, rng, degree=1):
    return Endo(ch, [[rand_poly(ch, rng, degree, 2) for _ in ch.names] for _ in ch.names])


# ---- wedge, d, interior ------------------------------------------------------------

def test_wedge_antisymmetry():
    dx, dp = C.dcoord(XPU, "x"), C.dcoord(XPU, "p")
    assert dx.wedge(dx).is_zero()
    assert dx.wedge(dp) == -dp.wedge(dx)


def test_E_wedge_Lambda():
    J = G.J_can(1)
    P = lambda n: C.partial(XPU, n)
    assert J.E.wedge(J.Lam) == P("u").wedge(P("p")).wedge(P("x"))
    assert J.E.wedge(J.Lam).comps == {(0, 1, 2): XPU.const(-1)}


def test_d_examples():
    x, p, u = XPU.coords()
    assert C.d(G.theta_can(1)) == C.dcoords(XPU, "x", "p")
    f = x * p ** 2 + u
    assert C.d(C.d(C.scalar_form(f))).is_zero()
    ch = Chart(("x", "y"))
    assert C.d(C.dcoord(ch, "y").scale(ch.coord("x"))) == C.dcoords(ch, "x", "y")


def test_interior_examples():
    x, p, u = XPU.coords()
    w = C.dcoords(XPU, "x", "p")
    assert C.interior(C.partial(XPU, "x"), w) == C.dcoord(XPU, "p")
    assert C.interior(C.partial(XPU, "x"), C.scalar_form(x)).is_zero()
    Z = C.partial(XPU, "p").scale(p)
    assert C.interior(Z, w) == -C.dcoord(XPU, "x").scale(p)


# ---- Lie derivatives and Schouten -----------------------------------------------------

def test_homogeneous_poisson_scaling():
    h = G.pi_can(1)
    assert C.lie_derivative(h.Z, h.pi) == -h.pi
    assert C.lie_derivative(h.Z, G.Omega_can(1)) == G.Omega_can(1)
    X = C.partial(XP, "x").scale(XP.coord("p"))
    assert C.lie_derivative(X, X).is_zero()


def test_jacobi_pair_schouten():
    J = G.J_can(1)
    assert C.schouten(J.Lam, J.Lam) == J.E.wedge(J.Lam).scale(2)
    assert C.schouten(J.E, J.Lam).is_zero()


def test_schouten_on_vectors_is_lie_bracket():
    rng = random.Random(3)
    X, Y = rand_vector(XPU, rng), rand_vector(XPU, rng)
    assert C.schouten(X, Y) == C.lie_bracket(X, Y)


# ---- Nijenhuis torsion ---------------------------------------------------------------

def test_nijenhuis_identity_and_A_can():
    assert not C.nijenhuis11(Endo.identity(XPU))
    assert not C.nijenhuis11(G.A_can(1))
    assert not C.nijenhuis11(G.A_can(2))


def test_nijenhuis_witness():
    x = UXY.coord("x")
    dx, dy = C.dcoord(UXY, "x"), C.dcoord(UXY, "y")
    P = lambda n: C.partial(UXY, n)
    J = Endo.tensor(dx, P("y")) - Endo.tensor(dy, P("x"))
    # an x dy (x) d_u perturbation is still integrable
    assert not C.nijenhuis11(J + Endo.tensor(dy.scale(x), P("u")))
    bad = J + Endo.tensor(dx.scale(x), P("u"))
    N = C.nijenhuis11(bad)
    assert N == {(1, 2): P("u")}
    assert C.nijenhuis_on(bad, P("x"), P("y")) == P("u")


# ---- properties ----------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)
charts = st.sampled_from(CHARTS)


@given(seeds, charts, st.integers(0, 3))
def test_d_squared_is_zero(seed, ch, k):
    if k > ch.dim:
        return
    w = rand_form(ch, k, random.Random(seed), 3)
    assert C.d(C.d(w)).is_zero()


@given(seeds, charts, st.integers(0, 3))
def test_d_is_a_graded_derivation(seed, ch, k):
    rng = random.Random(seed)
    a = rand_form(ch, min(k, ch.dim), rng, 2)
    b = rand_form(ch, 1, rng, 2)
    sign = -1 if a.degree % 2 else 1
    assert C.d(a.wedge(b)) == C.d(a).wedge(b) + a.wedge(C.d(b)).scale(sign)


@given(seeds, charts, st.integers(0, 3))
def test_cartan_formula(seed, ch, k):
    if k > ch.dim:
        return
    rng = random.Random(seed)
    X, w = rand_vector(ch, rng), rand_form(ch, k, rng, 2)
    rhs = C.d(C.interior(X, w)) if k else C.zero_form(ch, 0)
    rhs = rhs + C.interior(X, C.d(w))
    assert C.lie_form(X, w) == rhs


@given(seeds, st.sampled_from(CHARTS[1:4]), st.integers(1, 2), st.integers(1, 2), st.integers(1, 2))
def test_schouten_graded_jacobi(seed, ch, p, q, r):
    rng = random.Random(seed)
    P, Q, R = (rand_multivector(ch, k, rng) for k in (p, q, r))
    sign = -1 if ((p - 1) * (q - 1)) % 2 else 1
    lhs = C.schouten(P, C.schouten(Q, R))
    rhs = C.schouten(C.schouten(P, Q), R) + C.schouten(Q, C.schouten(P, R)).scale(sign)
    assert lhs == rhs


@given(seeds, st.sampled_from(CHARTS[1:4]))
def test_nijenhuis_is_tensorial(seed, ch):
    rng = random.Random(seed)
    Phi = rand_endo(ch, rng)
    X, Y = rand_vector(ch, rng, 1), rand_vector(ch, rng, 1)
    f = rand_poly(ch, rng, 2)
    N = C.nijenhuis_on(Phi, X, Y)
    assert C.nijenhuis_on(Phi, X.scale(f), Y) == N.scale(f)
    assert C.nijenhuis_on(Phi, X, Y.scale(f)) == N.scale(f)
