"""Generalized contact operators, homogeneous generalized complex pairs and
the classification of complex Dirac-Jacobi frames."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .. import cartan as C
from .. import linalg as LA
from .. import omni as O
from ..atiyah import AtiyahForm, Derivation, atiyah_d, atiyah_flat_matrix, jet
from ..cartan import Endo, Form, Multivector
from ..conventions import CONTACT_OMEGA_SIGN
from ..errors import NotAlmostComplex, NotGeneralizedComplex, PreconditionFailed
from ..report import Report
from ..scalars import Chart, Scalar
from .jacobi import atiyah_from_flat, invert_jacobi, jacobi_from_sharp, sharp_matrix

Matrix = list[list[Scalar]]


def _blocks(TL: Matrix, TR: Matrix, BL: Matrix, BR: Matrix) -> Matrix:
    return [a + b for a, b in zip(TL, TR)] + [a + b for a, b in zip(BL, BR)]


def _split(K: Matrix, n: int) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    return ([r[:n] for r in K[:n]], [r[n:] for r in K[:n]],
            [r[:n] for r in K[n:]], [r[n:] for r in K[n:]])


def _neg(M: Matrix) -> Matrix:
    return [[-e for e in r] for r in M]


def _is_minus_identity(M: Matrix) -> list[str]:
    bad = []
    for a, row in enumerate(M):
        for b, e in enumerate(row):
            target = -1 if a == b else 0
            if e != target:
                bad.append(f"({a},{b}) = {e}")
    return bad


def _pairing_matrix(chart: Chart, n: int) -> Matrix:
    z, o = chart.zero, chart.one
    return [[o if (b == a + n or a == b + n) else z for b in range(2 * n)] for a in range(2 * n)]


def _skew_defect(K: Matrix, chart: Chart, n: int) -> list[str]:
    G = _pairing_matrix(chart, n)
    S = LA.matmul(LA.transpose(K), G)
    T = LA.matmul(G, K)
    bad = []
    for a in range(2 * n):
        for b in range(a, 2 * n):
            v = S[a][b] + T[a][b]
            if not v.is_zero():
                bad.append(f"<<K e{a}, e{b}>> + <<e{a}, K e{b}>> = {v}")
    return bad


# ---- generalized contact operators ---------------------------------------------------

class GenContactOp:
    """``K = (phi, J#; w_flat, -phi^T)`` in the frames ``{d_i, one}``, ``{dx^i, j}``."""

    def __init__(self, chart: Chart, phi: Matrix | None = None, Lam: Multivector | None = None,
                 E: Multivector | None = None, omega: AtiyahForm | None = None,
                 matrix: Matrix | None = None):
        n = chart.dim + 1
        self.chart = chart
        self.phi = phi if phi is not None else [[chart.zero] * n for _ in range(n)]
        self.Lam = Lam if Lam is not None else C.zero_multivector(chart, 2)
        self.E = E if E is not None else C.zero_multivector(chart, 1)
        self.omega = omega if omega is not None else AtiyahForm.zero(chart, 2)
        if matrix is None:
            matrix = _blocks(self.phi, sharp_matrix(self.Lam, self.E),
                             atiyah_flat_matrix(self.omega), _neg(LA.transpose(self.phi)))
        self._K = matrix

    @classmethod
    def from_matrix(cls, chart: Chart, K: Matrix) -> "GenContactOp":
        n = chart.dim + 1
        TL, TR, BL, _ = _split(K, n)
        J = jacobi_from_sharp(chart, TR)
        return cls(chart, TL, J.Lam, J.E, atiyah_from_flat(chart, BL), matrix=K)

    def matrix(self) -> Matrix:
        return self._K

    def apply(self, a: O.OmniSection) -> O.OmniSection:
        return O.OmniSection.from_components(self.chart, LA.matvec(self._K, a.components()))

    @property
    def size(self) -> int:
        return self.chart.dim + 1


def contact_operator(Lam: Multivector, E: Multivector) -> GenContactOp:
    """``(0, J#; -w_flat, 0)`` for a non-degenerate Jacobi pair with ``w = J^-1``."""
    inv = invert_jacobi(Lam, E)
    return GenContactOp(Lam.chart, Lam=Lam, E=E, omega=inv.omega.scale(CONTACT_OMEGA_SIGN))


def complex_operator(phi: Matrix, chart: Chart) -> GenContactOp:
    return GenContactOp(chart, phi=phi)


def bfield_operator(K: GenContactOp, B: AtiyahForm) -> GenContactOp:
    """``K^B = e^B K e^-B``."""
    chart = K.chart
    n = K.size
    I = LA.identity(chart, n)
    Z = [[chart.zero] * n for _ in range(n)]
    F = atiyah_flat_matrix(B)
    eB = _blocks(I, Z, F, I)
    emB = _blocks(I, Z, _neg(F), I)
    return GenContactOp.from_matrix(chart, LA.matmul(eB, LA.matmul(K.matrix(), emB)))


def _square_defect(M: Matrix) -> list[str]:
    return _is_minus_identity(LA.matmul(M, M))


def eigenframe(K: GenContactOp, samples=None) -> O.Frame:
    """The ``+i`` eigenbundle, spanned by ``(id - i K) e_b``."""
    if _square_defect(K.matrix()):
        raise NotAlmostComplex("K^2 != -id")
    chart = K.chart
    i = chart.i
    M = K.matrix()
    gens = []
    for b in range(2 * K.size):
        col = [(-i) * M[a][b] for a in range(2 * K.size)]
        col[b] = col[b] + 1
        gens.append(O.OmniSection.from_components(chart, col))
    F = O.reduce_frame(O.make_frame(chart, gens, samples))
    if len(F) != K.size:
        raise NotAlmostComplex(f"eigenbundle rank {len(F)} != {K.size}")
    return F


def check_gen_contact(K: GenContactOp) -> Report:
    rep = Report("generalized contact")
    sq = _square_defect(K.matrix())
    for w in sq[:4]:
        rep.fail(f"K^2 + id at {w}")
    for w in _skew_defect(K.matrix(), K.chart, K.size)[:4]:
        rep.fail(w)
    if sq:
        return rep
    F = eigenframe(K)
    rep.absorb(O.check_isotropic(F), "eigenbundle")
    if rep.passed:
        rep.absorb(O.check_involutive(F), "integrability")
    rep.data["eigenframe"] = F
    return rep


# ---- homogeneous generalized complex structures ------------------------------------

@dataclass(frozen=True)
class HomGC:
    A: Endo
    pi: Multivector
    sigma: Form
    Z: Multivector
    zeta: Form

    @property
    def chart(self) -> Chart:
        return self.A.chart

    def matrix(self) -> Matrix:
        """``(A, pi#; sigma_flat, -A^*)`` on ``[X; eta]``."""
        chart = self.chart
        m = chart.dim
        basis_f = [C.dcoord(chart, a) for a in chart.names]
        basis_v = [C.partial(chart, a) for a in chart.names]
        pcols = [C.components(C.sharp(self.pi, e)) if not self.pi.is_zero() else [chart.zero] * m
                 for e in basis_f]
        scols = [C.components(C.interior(X, self.sigma)) if not self.sigma.is_zero() else [chart.zero] * m
                 for X in basis_v]
        Pi = [[pcols[b][a] for b in range(m)] for a in range(m)]
        S = [[scols[b][a] for b in range(m)] for a in range(m)]
        return _blocks(self.A.M, Pi, S, _neg(LA.transpose(self.A.M)))


def _tm_section(chart: Chart, X: Multivector, eta: Form) -> O.OmniSection:
    # T M (+) T*M sits inside D R (+) J^1 R with vanishing one- and j-components
    return O.OmniSection(Derivation(X, chart.zero), jet(eta, chart.zero))


def _tm_eigenvectors(h: HomGC) -> list[tuple[Multivector, Form]]:
    chart = h.chart
    m = chart.dim
    M = h.matrix()
    if _square_defect(M):
        raise NotGeneralizedComplex("J^2 != -id")
    i = chart.i
    vecs = []
    for b in range(2 * m):
        col = [(-i) * M[a][b] for a in range(2 * m)]
        col[b] = col[b] + 1
        vecs.append(O.clear_denominators(col))
    keep = LA.independent_rows(vecs)
    if len(keep) != m:
        raise NotGeneralizedComplex(f"eigenbundle rank {len(keep)} != {m}")
    return [(C.vector(chart, vecs[k][:m]), C.one_form(chart, vecs[k][m:])) for k in keep]


def check_generalized_complex(h: HomGC) -> Report:
    rep = Report("generalized complex")
    chart = h.chart
    M = h.matrix()
    for w in _square_defect(M)[:4]:
        rep.fail(f"J^2 + id at {w}")
    for w in _skew_defect(M, chart, chart.dim)[:4]:
        rep.fail(w)
    if not rep.passed:
        return rep
    gens = [_tm_section(chart, X, eta) for X, eta in _tm_eigenvectors(h)]
    for b, c in combinations(range(len(gens)), 2):
        br = O.dorfman(gens[b], gens[c])
        for a in range(len(gens)):
            v = O.omni_pair(gens[a], br)
            if not v.is_zero():
                rep.fail(f"eigenbundle not involutive: Upsilon(g{a}, g{b}, g{c}) = {v}")
    return rep


def _iota_A(A: Endo, w: Form) -> Form:
    chart = A.chart
    basis = [C.partial(chart, a) for a in chart.names]
    comps = {}
    for i, j in combinations(range(chart.dim), 2):
        v = (C.evaluate_form(w, A.apply(basis[i]), basis[j])
             + C.evaluate_form(w, basis[i], A.apply(basis[j])))
        if not v.is_zero():
            comps[(i, j)] = v
    return Form(chart, 2, comps)


def hom_gc_defects(h: HomGC) -> dict[str, Any]:
    chart = h.chart
    m = chart.dim
    dz = C.d(h.zeta)
    basis_v = [C.partial(chart, a) for a in chart.names]
    basis_f = [C.dcoord(chart, a) for a in chart.names]
    # pi# o (d zeta)_flat as a (1,1)-tensor
    cols = []
    for X in basis_v:
        a = C.interior(X, dz) if not dz.is_zero() else C.zero_form(chart, 1)
        v = C.sharp(h.pi, a) if not (a.is_zero() or h.pi.is_zero()) else C.zero_multivector(chart, 1)
        cols.append(C.components(v))
    P = Endo(chart, [[cols[b][a] for b in range(m)] for a in range(m)])
    d1 = C.lie_endo(h.Z, h.A) - P
    d2 = C.lie_multivector(h.Z, h.pi) + h.pi
    d3 = C.lie_form(h.Z, h.sigma) - h.sigma + _iota_A(h.A, dz)
    del basis_f
    return {"L_Z A - pi# dzeta": d1, "L_Z pi + pi": d2, "L_Z sigma - sigma + i_A dzeta": d3}


def _prop_crosscheck(h: HomGC) -> bool:
    """``([Z,X] + X, L_Z eta + i_X d zeta)`` stays in the eigenbundle."""
    chart = h.chart
    eig = _tm_eigenvectors(h)
    rows = [C.components(X) + C.components(eta) for X, eta in eig]
    r = LA.rank(rows)
    dz = C.d(h.zeta)
    for X, eta in eig:
        Y = C.lie_bracket(h.Z, X) + X
        xi = C.lie_form(h.Z, eta)
        if not dz.is_zero():
            xi = xi + C.interior(X, dz)
        if LA.rank(rows + [C.components(Y) + C.components(xi)]) != r:
            return False
    return True


def check_hom_gc(h: HomGC) -> Report:
    gc = check_generalized_complex(h)
    if not gc.passed:
        raise NotGeneralizedComplex("; ".join(gc.witnesses))
    rep = Report("homogeneous generalized complex")
    defects = hom_gc_defects(h)
    for name, v in defects.items():
        if not v.is_zero():
            rep.fail(f"{name} = {v!r}")
    cross = _prop_crosscheck(h)
    rep.data["eigenbundle_criterion"] = cross
    if cross != rep.passed:
        rep.fail("eigenbundle criterion disagrees with the homogeneity defects")
    return rep


def build_L_JZ(h: HomGC, samples=None) -> O.Frame:
    chart = h.chart
    Z, zeta = h.Z, h.zeta
    gens = [O.OmniSection(Derivation(-Z, chart.one), jet(zeta, C.pair(zeta, Z)))]
    for X, eta in _tm_eigenvectors(h):
        g = C.pair(eta, Z) - C.pair(zeta, X)
        gens.append(O.OmniSection(Derivation(X, chart.zero), jet(eta, g)))
    F = O.reduce_frame(O.make_frame(chart, gens, samples))
    if len(F) != chart.dim + 1:
        raise NotGeneralizedComplex(f"rank {len(F)} != {chart.dim + 1}")
    return F


# ---- classification ---------------------------------------------------------------------

@dataclass
class Classification:
    kind: str
    data: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return self.kind


def classify_dj(F: O.Frame, check: bool = True) -> Classification:
    chart = F.chart
    n = chart.dim + 1
    if check:
        iso = O.check_maximal_isotropic(F)
        if not iso.passed:
            raise PreconditionFailed("frame is not maximal isotropic: " + "; ".join(iso.witnesses))
        inv = O.check_involutive(F)
        if not inv.passed:
            raise PreconditionFailed("frame is not involutive: " + "; ".join(inv.witnesses))
    inter = O.intersection_with_conjugate(F)
    k = len(inter)
    data: dict[str, Any] = {"intersection_rank": k}
    if k == 0:
        return Classification("generalized_contact", data)
    if k != 1:
        return Classification("neither", data)
    Fb = F.conj()
    Dall = [g.D.components() for g in F.gens + Fb.gens]
    full = LA.rank(Dall) == n and all(LA.rank_at(Dall, p) == n for p in F.samples)
    data["projection_full"] = full
    s = O.clean_section(inter[0])
    f = s.D.f
    data["section"] = s
    at = {str(p): f.evaluate(p) for p in F.samples}
    data["one_component_at_samples"] = at
    surj = not f.is_zero() and all(v != 0 for v in at.values())
    data["one_component_nonvanishing"] = surj
    if not f.is_zero():
        real = s.scale(f.inverse())
        data["real_section"] = real
        data["real_section_is_real"] = real == real.conj()
    if full and surj:
        return Classification("hom_gc", data)
    return Classification("neither", data)
