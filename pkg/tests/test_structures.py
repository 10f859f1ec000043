import random

import pytest
from hypothesis import given, strategies as st

from jacobigeom import cartan as C
from jacobigeom import linalg as LA
from jacobigeom import omni as O
from jacobigeom.atiyah import AtiyahForm, Derivation, atiyah_d, atiyah_flat_matrix
from jacobigeom.cartan import Endo
from jacobigeom.errors import Degenerate, NotAlmostComplex, NotFlat, UnknownName
from jacobigeom.randgen import almost_contact_from_alpha, rand_closed_B, rand_gauge_complex, rand_poly
from jacobigeom.scalars import Chart
from jacobigeom.structures import gallery as G
from jacobigeom.structures import gencontact as GC
from jacobigeom.structures import jacobi as JB
from jacobigeom.structures import nacs as NA
from jacobigeom.structures.products import hom_poisson_frame

XPU = Chart(("x", "p", "u"))
YQ = Chart(("y", "q"))


def _zero_pair(ch):
    return C.zero_multivector(ch, 2), C.zero_multivector(ch, 1)


# ---- Jacobi pairs and homogeneous Poisson structures --------------------------------

@pytest.mark.parametrize("d", [1, 2])
def test_canonical_jacobi_pair(d):
    J = G.J_can(d)
    assert JB.check_jacobi_pair(J.Lam, J.E).passed


def test_jacobi_pair_examples():
    assert JB.check_jacobi_pair(*_zero_pair(XPU)).passed
    J = G.J_can(1)
    rep = JB.check_jacobi_pair(J.Lam, C.zero_multivector(XPU, 1))
    assert not rep.passed and rep.witnesses
    # d_x ^ (d_p + u d_u) is Poisson: d_x commutes with d_p + u d_u
    P = lambda n: C.partial(XPU, n)
    u = XPU.coord("u")
    Lam = P("x").wedge(P("p")) + P("x").wedge(P("u")).scale(u)
    assert JB.check_jacobi_pair(Lam, C.zero_multivector(XPU, 1)).passed


def test_jacobi_bracket_calibration():
    J = G.J_can(1)
    x, p, u = XPU.coords()
    for f, g in [(x, p), (p * u, x ** 2), (u, x * p)]:
        direct = (C.evaluate_multivector(J.Lam, C.d(C.scalar_form(f)), C.d(C.scalar_form(g)))
                  + C.vector_apply(J.E, f) * g - f * C.vector_apply(J.E, g))
        assert J.bracket(f, g) == direct


@pytest.mark.parametrize("d", [1, 2])
def test_canonical_hom_poisson(d):
    h = G.pi_can(d)
    assert JB.check_hom_poisson(h.pi, h.Z).passed


def test_hom_poisson_failures():
    h = G.pi_can(1)
    rep = JB.check_hom_poisson(h.pi, C.zero_multivector(h.chart, 1))
    assert not rep.passed and "L_Z pi + pi" in rep.witnesses[0]
    ch = h.chart
    x = ch.coord("x")
    pi = C.partial(ch, "x").wedge(C.partial(ch, "p")).scale(x)
    assert not JB.check_hom_poisson(pi, C.partial(ch, "x").scale(x)).passed


# ---- generalized contact operators -----------------------------------------------------

def test_canonical_operators():
    assert GC.check_gen_contact(G.canonical("K_can")).passed
    for n in (1, 2):
        assert GC.check_gen_contact(G.canonical("K_phi_can", n)).passed


def test_flipped_phi_fails_square():
    phi = G.phi_can(1)
    phi[0][-1] = -phi[0][-1]
    K = GC.complex_operator(phi, G.cylinder_chart(1))
    rep = GC.check_gen_contact(K)
    assert not rep.passed and "K^2" in rep.witnesses[0]


def test_eigenframe_examples():
    ch = G.cylinder_chart(1)
    F = GC.eigenframe(G.canonical("K_phi_can"))
    box2 = O.section(Derivation(C.partial(ch, "u").scale(-ch.i), ch.one))
    assert O.in_span(F, box2)
    with pytest.raises(NotAlmostComplex):
        GC.eigenframe(GC.GenContactOp(XPU))


def test_contact_eigenframe_is_bfield_of_derivations():
    F = GC.eigenframe(G.canonical("K_can"))
    w = G.omega_can(1)
    assert O.frame_equal(F, O.frame_bfield(w.scale(XPU.i), O.dr_frame(XPU)))
    assert not O.frame_equal(F, O.frame_bfield(w.scale(-XPU.i), O.dr_frame(XPU)))


@given(st.integers(0, 10 ** 6))
def test_eigenframe_of_bfield_operator(seed):
    B = rand_closed_B(XPU, random.Random(seed), 1)
    K = G.canonical("K_can")
    lhs = O.frame_bfield(B, GC.eigenframe(K))
    rhs = GC.eigenframe(GC.bfield_operator(K, B))
    assert O.frame_equal(lhs, rhs)


# ---- homogeneous generalized complex structures ---------------------------------------

def test_hom_gc_examples():
    assert GC.check_hom_gc(G.hgc_Cn(1)).passed
    assert GC.check_hom_gc(G.hgc_Cn(2)).passed
    assert GC.check_hom_gc(G.hgc_symplectic(1)).passed
    h = G.hgc_Cn(1)
    ch = h.chart
    # constant A_can is invariant under d_x: still homogeneous
    assert GC.check_hom_gc(GC.HomGC(h.A, h.pi, h.sigma, C.partial(ch, "x"), h.zeta)).passed
    bad = GC.check_hom_gc(GC.HomGC(h.A, h.pi, h.sigma, C.partial(ch, "x").scale(ch.coord("x")), h.zeta))
    assert not bad.passed
    assert bad.data["eigenbundle_criterion"] is False


def test_build_L_JZ_complex_model():
    F = GC.build_L_JZ(G.hgc_Cn(1))
    ch = F.chart
    i = ch.i
    dz = AtiyahForm.embed(C.dcoord(ch, "x") - C.dcoord(ch, "y").scale(i))
    expected = O.make_frame(ch, [
        O.section(Derivation.one(ch)),
        O.section(Derivation.from_vector(C.partial(ch, "x") - C.partial(ch, "y").scale(i))),
        O.section(psi=dz),
    ])
    assert O.frame_equal(F, expected)
    assert O.check_dirac_jacobi(F).passed


def test_build_L_JZ_symplectic_model():
    F = GC.build_L_JZ(G.hgc_symplectic(1))
    xi = G.xi_can(1)
    assert O.frame_equal(F, O.frame_bfield(xi.scale(F.chart.i), O.dr_frame(F.chart)))
    assert O.check_dirac_jacobi(F).passed


def test_classification():
    c = GC.classify_dj(GC.eigenframe(G.canonical("K_can")))
    assert c.kind == "generalized_contact"
    c = GC.classify_dj(G.canonical("L_Cn"))
    assert c.kind == "hom_gc"
    real = c.data["real_section"]
    assert real == O.section(Derivation.one(real.chart))
    c = GC.classify_dj(O.jet_frame(XPU))
    assert c.kind == "neither"
    assert GC.classify_dj(G.canonical("L_can_ev")).kind == "hom_gc"


# ---- almost contact structures --------------------------------------------------------

UXY = G.cylinder_chart(1)


@pytest.mark.parametrize("f", ["0", "x", "x*y"])
def test_normal_form_nacs(f):
    u, x, y = UXY.coords()
    fv = {"0": UXY.zero, "x": x, "x*y": x * y}[f]
    t = G.nacs_normal_form(fv)
    rep = NA.check_nacs(t)
    assert rep.passed and rep.data["dl_complex"]
    assert NA.check_dl_complex(NA.to_phi(t), UXY).passed


def test_normal_form_f_zero_is_standard():
    t = G.nacs_normal_form(UXY.zero)
    P = lambda n: C.partial(UXY, n)
    Phi = Endo.tensor(C.dcoord(UXY, "x"), P("y")) - Endo.tensor(C.dcoord(UXY, "y"), P("x"))
    assert t.Phi == Phi and t.xi == P("u") and t.eta == C.dcoord(UXY, "u")
    # phi(X, r) = (Phi X - r xi, eta(X)) sends one to -d_u: phi_can read with u -> -u
    flip = G.phi_can(1)
    flip[0][-1], flip[-1][0] = -flip[0][-1], -flip[-1][0]
    assert NA.to_phi(t) == flip


def test_non_normal_almost_contact():
    u = UXY.coord("u")
    t = almost_contact_from_alpha(C.dcoord(UXY, "x").scale(u))
    assert NA.check_almost_contact(t).passed
    rep = NA.check_nacs(t)
    assert not rep.passed and rep.witnesses[0].startswith("N_Phi + d eta")
    assert not NA.check_dl_complex(NA.to_phi(t), UXY).passed


@pytest.mark.parametrize("n", [1, 2])
def test_phi_can(n):
    assert NA.check_dl_complex(G.phi_can(n), G.cylinder_chart(n)).passed


def test_perturbed_phi_can():
    phi = G.phi_can(1)
    phi[-1][-1] = UXY.coord("x")
    rep = NA.check_dl_complex(phi, UXY)
    assert not rep.passed and "phi^2" in rep.witnesses[0]


@given(st.integers(0, 10 ** 6))
def test_gauge_transform_is_conjugation(seed):
    rng = random.Random(seed)
    u, x, y = UXY.coords()
    t = G.nacs_normal_form(rand_poly(UXY, rng, 2, names=("x", "y")))
    f = rand_poly(UXY, rng, 2)
    conj = NA.gauge_conjugate(NA.to_phi(t), f)
    assert NA.to_phi(NA.gauge_transform(t, f)) == conj
    back = NA.gauge_transform(NA.gauge_transform(t, f), -f)
    assert NA.to_phi(back) == NA.to_phi(t)


@given(st.integers(0, 10 ** 6), st.booleans())
def test_homogenization_equivalence(seed, integrable):
    phi, ch, built = rand_gauge_complex(random.Random(seed), 1, integrable)
    flat = not NA.dl_torsion_table(phi, ch)
    lifted = all(v.is_zero() for v in NA.homogenized_torsion(phi, ch).values())
    assert flat == lifted
    if built:
        assert flat


# ---- splittings -----------------------------------------------------------------------

def test_split_contact_examples():
    J = JB.split_contact(*_zero_pair(YQ), d=1)
    Jc = G.J_can(1)
    assert J.Lam == Jc.Lam.lift(J.chart) and J.E == Jc.E.lift(J.chart)
    h = G.pi_can(1, ("y", "q"))
    Jx = JB.split_contact(h.pi, h.Z)
    assert JB.check_jacobi_pair(Jx.Lam, Jx.E).passed
    J0 = JB.split_contact(h.pi, C.zero_multivector(YQ, 1))
    assert not JB.check_jacobi_pair(J0.Lam, J0.E).passed


def test_split_lcs_examples():
    ABC = Chart(("a", "b", "c"))
    J = JB.split_lcs(*_zero_pair(ABC), d=1)
    h = G.pi_can(1)
    assert J.Lam == h.pi.lift(J.chart) and J.E.is_zero()
    Jc = G.J_can(1, ("a", "b", "c"))
    Jl = JB.split_lcs(Jc.Lam, Jc.E)
    assert JB.check_jacobi_pair(Jl.Lam, Jl.E).passed
    J0 = JB.split_lcs(Jc.Lam, C.zero_multivector(ABC, 1))
    assert not JB.check_jacobi_pair(J0.Lam, J0.E).passed


@pytest.mark.parametrize("c", [0, 1, -2, 3])
@pytest.mark.parametrize("with_Z", [True, False])
def test_split_contact_iff_homogeneous(c, with_Z):
    h = G.pi_can(1, ("y", "q"))
    pi = h.pi.scale(c)
    Z = h.Z if with_Z else C.zero_multivector(YQ, 1)
    J = JB.split_contact(pi, Z)
    assert JB.check_jacobi_pair(J.Lam, J.E).passed == JB.check_hom_poisson(pi, Z).passed


def test_contact_splitting_identity():
    h = G.pi_can(1, ("y", "q"))
    Jc = G.J_can(1)
    Jx = JB.split_contact(h.pi, h.Z)
    Lx = O.flat_product(hom_poisson_frame(h.pi, h.Z), O.graph_jacobi(Jc.Lam, Jc.E))
    assert O.frame_equal(Lx, O.graph_jacobi(Jx.Lam, Jx.E))


# ---- lcs and inversion ----------------------------------------------------------------

def test_lcs_to_jacobi():
    ch = G.symplectic_chart(1)
    J = JB.lcs_to_jacobi(G.Omega_can(1), C.zero_form(ch, 1))
    h = G.pi_can(1)
    assert J.Lam == h.pi and J.E.is_zero()
    with pytest.raises(Degenerate):
        JB.lcs_to_jacobi(C.zero_form(XPU, 2), C.zero_form(XPU, 1))
    with pytest.raises(NotFlat):
        JB.lcs_to_jacobi(G.Omega_can(1), C.dcoord(ch, "p").scale(ch.coord("x")))
    # a closed, non-exact-looking gamma gives a genuine Jacobi pair
    Jg = JB.lcs_to_jacobi(G.Omega_can(1), C.dcoord(ch, "x"))
    assert JB.check_jacobi_pair(Jg.Lam, Jg.E).passed and not Jg.E.is_zero()


def test_invert_jacobi():
    J = G.J_can(1)
    inv = JB.invert_jacobi(J.Lam, J.E)
    assert inv.omega == G.omega_can(1)
    assert inv.theta == G.theta_can(1)
    with pytest.raises(Degenerate):
        JB.invert_jacobi(*_zero_pair(XPU))
    # J# is exactly the inverse of the flat map of omega_can: same graph
    assert O.frame_equal(O.graph_jacobi(J.Lam, J.E), O.graph_atiyah(G.omega_can(1)))
    assert not O.frame_equal(O.graph_jacobi(J.Lam, J.E), O.graph_atiyah(-G.omega_can(1)))
    M = LA.matmul(J.sharp_matrix(), atiyah_flat_matrix(G.omega_can(1)))
    assert M == LA.identity(XPU, 4)


def test_gallery_lookup():
    assert G.canonical("theta_can") == G.theta_can(1)
    with pytest.raises(UnknownName):
        G.canonical("nope")
    assert G.canonical("xi_can") == G.xi_can(1)
    assert G.xi_can(1) == -atiyah_d(AtiyahForm.embed(G.Theta_can(1)))
