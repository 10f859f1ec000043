"""Jacobi pairs, homogeneous Poisson structures and the splitting products."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from .. import cartan as C
from .. import linalg as LA
from ..atiyah import AtiyahForm, Derivation, atiyah_d, atiyah_flat_matrix, standard_jets
from ..conventions import jacobi_bracket, jacobi_sharp
from ..errors import ChartMismatch, CoordinateClash, Degenerate, NotFlat, SingularMatrix
from ..report import Report
from ..scalars import Chart, Scalar
from ..cartan import Form, Multivector


@dataclass(frozen=True)
class JacobiPair:
    Lam: Multivector
    E: Multivector

    @property
    def chart(self) -> Chart:
        return self.Lam.chart

    def bracket(self, f: Scalar, g: Scalar) -> Scalar:
        return jacobi_bracket(self.Lam, self.E, f, g)

    def sharp_matrix(self) -> list[list[Scalar]]:
        return sharp_matrix(self.Lam, self.E)


@dataclass(frozen=True)
class HomPoisson:
    pi: Multivector
    Z: Multivector

    @property
    def chart(self) -> Chart:
        return self.pi.chart


def _same_chart(*ts) -> Chart:
    chart = ts[0].chart
    for t in ts[1:]:
        if t.chart is not chart:
            raise ChartMismatch(f"{t.chart} vs {chart}")
    return chart


# ---- matrices of sharp and flat maps ---------------------------------------------

def sharp_matrix(Lam: Multivector, E: Multivector) -> list[list[Scalar]]:
    """``J#`` in the frames ``{dx^i, j}`` -> ``{d_i, one}``, column per jet."""
    chart = _same_chart(Lam, E)
    cols = [jacobi_sharp(Lam, E, psi).components() for psi in standard_jets(chart)]
    n = chart.dim + 1
    return [[cols[b][a] for b in range(n)] for a in range(n)]


def jacobi_from_sharp(chart: Chart, M: list[list[Scalar]]) -> JacobiPair:
    """Read ``(Lambda, E)`` back from a sharp matrix."""
    n = chart.dim
    E = C.vector(chart, [-M[a][n] for a in range(n)])
    comps = {}
    for i, j in combinations(range(n), 2):
        v = M[j][i]
        if not v.is_zero():
            comps[(i, j)] = v
    return JacobiPair(Multivector(chart, 2, comps), E)


def atiyah_from_flat(chart: Chart, M: list[list[Scalar]]) -> AtiyahForm:
    """Inverse of :func:`jacobigeom.atiyah.atiyah_flat_matrix` on 2-forms."""
    n = chart.dim
    w0 = {}
    for i, j in combinations(range(n), 2):
        v = M[j][i]
        if not v.is_zero():
            w0[(i, j)] = v
    w1 = C.one_form(chart, [-M[a][n] for a in range(n)])
    return AtiyahForm.make(Form(chart, 2, w0), w1)


# ---- checkers ------------------------------------------------------------------------

def monomials(chart: Chart, max_degree: int = 2) -> list[Scalar]:
    xs = chart.coords()
    out = [chart.one]
    for k in range(1, max_degree + 1):
        for combo in combinations_with_replacement(range(chart.dim), k):
            m = chart.one
            for i in combo:
                m = m * xs[i]
            out.append(m)
    return out


def jacobiator_witnesses(Lam: Multivector, E: Multivector, max_degree: int = 2, limit: int = 3) -> list[str]:
    """Evaluate ``{f,{g,h}} + cyc`` on monomial triples straight from the bracket formula."""
    chart = _same_chart(Lam, E)
    mons = monomials(chart, max_degree)
    dm = [C.d(C.scalar_form(m)) for m in mons]
    ham = [C.sharp(Lam, a) if not a.is_zero() else C.zero_multivector(chart, 1) for a in dm]
    Em = [C.vector_apply(E, m) for m in mons]

    def br_with(a: int, h: Scalar) -> Scalar:
        # {m_a, h} = Lambda(dm_a, dh) + E(m_a) h - m_a E(h)
        return C.vector_apply(ham[a], h) + Em[a] * h - mons[a] * C.vector_apply(E, h)

    B = {}
    for a, b in combinations(range(len(mons)), 2):
        B[(a, b)] = jacobi_bracket(Lam, E, mons[a], mons[b])
    out = []
    for a, b, c in combinations(range(len(mons)), 3):
        v = br_with(a, B[(b, c)]) - br_with(b, B[(a, c)]) + br_with(c, B[(a, b)])
        if not v.is_zero():
            out.append(f"Jacobi identity fails on ({mons[a]}, {mons[b]}, {mons[c]}): {v}")
            if len(out) >= limit:
                break
    return out


def check_jacobi_pair(Lam: Multivector, E: Multivector, oracle: bool = True) -> Report:
    _same_chart(Lam, E)
    rep = Report("jacobi pair")
    d1 = C.schouten(Lam, Lam) - (E.wedge(Lam)).scale(2)
    d2 = C.schouten(E, Lam)
    rep.data["defects"] = {"[L,L]-2E^L": d1, "[E,L]": d2}
    if not d1.is_zero():
        rep.fail(f"[L,L] - 2 E^L = {C.render_anti(d1)}")
    if not d2.is_zero():
        rep.fail(f"[E,L] = {C.render_anti(d2)}")
    if oracle:
        wit = jacobiator_witnesses(Lam, E)
        rep.data["oracle_agrees"] = (not wit) == rep.passed
        if wit and rep.passed:
            rep.fail("bracket oracle disagrees with the Schouten defects")
        for w in wit:
            rep.note(w)
    return rep


def check_hom_poisson(pi: Multivector, Z: Multivector) -> Report:
    _same_chart(pi, Z)
    rep = Report("homogeneous poisson")
    d1 = C.schouten(pi, pi)
    d2 = C.lie_multivector(Z, pi) + pi
    if not d1.is_zero():
        rep.fail(f"[pi,pi] = {C.render_anti(d1)}")
    if not d2.is_zero():
        rep.fail(f"L_Z pi + pi = {C.render_anti(d2)}")
    # the Schouten bracket [Z, pi] is the same Lie derivative
    if C.schouten(Z, pi) + pi != d2:
        rep.fail("Schouten and coordinate Lie derivatives disagree")
    return rep


# ---- splitting products ------------------------------------------------------------------

def _product(N: Chart, V: Chart) -> Chart:
    clash = set(N.names) & set(V.names)
    if clash:
        raise CoordinateClash(f"transversal and model share {sorted(clash)}")
    return N.union(V)


def split_contact(piN: Multivector, ZN: Multivector, d: int = 1) -> JacobiPair:
    """``(Lambda_can + pi_N - E_can ^ Z_N, E_can)`` on ``N x R^{2d+1}``."""
    from .gallery import canonical

    N = _same_chart(piN, ZN)
    J = canonical("J_can", d)
    M = _product(N, J.chart)
    Ec = J.E.lift(M)
    Lam = J.Lam.lift(M) + piN.lift(M) - Ec.wedge(ZN.lift(M))
    return JacobiPair(Lam, Ec)


def split_lcs(LamN: Multivector, EN: Multivector, d: int = 1) -> JacobiPair:
    """``(Lambda_N + pi_can - E_N ^ Z_can, E_N)`` on ``N x R^{2d}``."""
    from .gallery import canonical

    N = _same_chart(LamN, EN)
    h = canonical("pi_can", d)
    M = _product(N, h.chart)
    EM = EN.lift(M)
    Lam = LamN.lift(M) + h.pi.lift(M) - EM.wedge(h.Z.lift(M))
    return JacobiPair(Lam, EM)


# ---- lcs and non-degenerate Jacobi structures ------------------------------------

def poisson_inverse(Omega: Form) -> Multivector:
    """The bivector ``pi`` with ``pi# = (Omega_flat)^-1``."""
    chart = Omega.chart
    n = chart.dim
    if n % 2:
        raise Degenerate("a 2-form on an odd-dimensional chart is degenerate")
    basis = [C.partial(chart, a) for a in chart.names]
    flat = [C.components(C.interior(X, Omega)) for X in basis]
    Mflat = [[flat[b][a] for b in range(n)] for a in range(n)]
    try:
        P = LA.invert(Mflat)
    except SingularMatrix:
        raise Degenerate("the 2-form is degenerate") from None
    comps = {}
    for i, j in combinations(range(n), 2):
        # pi(dx^i, dx^j) = <dx^j, pi# dx^i>
        v = P[j][i]
        if not v.is_zero():
            comps[(i, j)] = v
    return Multivector(chart, 2, comps)


def lcs_to_jacobi(Omega: Form, gamma: Form, oracle: bool = True) -> JacobiPair:
    """Jacobi pair of the lcs structure ``(Omega, d + gamma)``.

    ``{l, m} = Omega^-1(d l + l gamma, d m + m gamma)`` gives
    ``Lambda = Omega^-1`` and ``E = -pi# gamma``.
    """
    chart = _same_chart(Omega, gamma)
    if not C.d(gamma).is_zero():
        raise NotFlat("d gamma is not zero")
    pi = poisson_inverse(Omega)
    E = -C.sharp(pi, gamma) if not gamma.is_zero() else C.zero_multivector(chart, 1)
    J = JacobiPair(pi, E)
    if oracle:
        for f in monomials(chart, 1):
            for g in monomials(chart, 2):
                a = C.d(C.scalar_form(f)) + gamma.scale(f)
                b = C.d(C.scalar_form(g)) + gamma.scale(g)
                if C.evaluate_multivector(pi, a, b) != J.bracket(f, g):
                    raise AssertionError(f"lcs bracket mismatch on ({f}, {g})")
        r = LA.rank(sharp_matrix(J.Lam, J.E))
        if r != chart.dim:
            raise AssertionError(f"rank J = {r}, expected {chart.dim}")
    return J


@dataclass(frozen=True)
class InverseJacobi:
    omega: AtiyahForm
    theta: Form


def invert_jacobi(Lam: Multivector, E: Multivector) -> InverseJacobi:
    """``w`` with ``w_flat = (J#)^-1`` and ``theta`` read from ``i_one w``."""
    chart = _same_chart(Lam, E)
    try:
        F = LA.invert(sharp_matrix(Lam, E))
    except SingularMatrix:
        raise Degenerate("J# is not invertible") from None
    omega = atiyah_from_flat(chart, F)
    if atiyah_flat_matrix(omega) != F:
        raise AssertionError("flat matrix of the inverse is not skew")
    if not atiyah_d(omega).is_zero():
        raise AssertionError("inverse Atiyah form is not closed")
    theta = C.one_form(chart, [F[a][chart.dim] for a in range(chart.dim)])
    return InverseJacobi(omega, theta)


def jacobi_derivation(J: JacobiPair, psi: AtiyahForm) -> Derivation:
    return jacobi_sharp(J.Lam, J.E, psi)
