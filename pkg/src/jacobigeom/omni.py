"""The omni-Lie algebroid ``D R_M = D R_M (+) J^1 R_M`` and Dirac-Jacobi frames.

A section is a pair ``(Delta, psi)``; in coordinates it is the vector
``[X^1..X^n, f, eta_1..eta_n, g]`` of length ``2(n+1)``.  A frame is a list
of sections spanning a subbundle over the fraction field, together with the
sample points at which pointwise ranks are certified.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import cartan as C
from . import linalg as LA
from .atiyah import (
    AtiyahForm,
    Derivation,
    atiyah_d,
    atiyah_interior,
    atiyah_lie,
    deriv_bracket,
    jet_from_components,
    jet_pair,
    standard_derivations,
    standard_jets,
)
from .conventions import jacobi_sharp
from .errors import (
    ChartMismatch,
    CleanIntersectionFailed,
    CoordinateClash,
    InconsistentSystem,
    NotClosed,
    NotInProjection,
    PreconditionNotMaximalIsotropic,
    RankDeficient,
)
from .report import Report
from .scalars import Chart, SamplePoint, Scalar


@dataclass(frozen=True)
class OmniSection:
    D: Derivation
    psi: AtiyahForm

    @property
    def chart(self) -> Chart:
        return self.D.chart

    @classmethod
    def from_components(cls, chart: Chart, comps: Sequence[Scalar]) -> "OmniSection":
        n = chart.dim + 1
        return cls(Derivation.from_components(chart, list(comps[:n])),
                   jet_from_components(chart, list(comps[n:])))

    def components(self) -> list[Scalar]:
        return self.D.components() + self.psi.components()

    def __add__(self, other: "OmniSection") -> "OmniSection":
        return OmniSection(self.D + other.D, self.psi + other.psi)

    def __sub__(self, other: "OmniSection") -> "OmniSection":
        return OmniSection(self.D - other.D, self.psi - other.psi)

    def __neg__(self) -> "OmniSection":
        return OmniSection(-self.D, -self.psi)

    def scale(self, s: Scalar) -> "OmniSection":
        return OmniSection(self.D.scale(s), self.psi.scale(s))

    def conj(self) -> "OmniSection":
        return OmniSection(self.D.conj(), self.psi.conj())

    def is_zero(self) -> bool:
        return self.D.is_zero() and self.psi.is_zero()

    def lift(self, chart: Chart) -> "OmniSection":
        return OmniSection(Derivation(self.D.X.lift(chart), self.D.f.lift(chart)), self.psi.lift(chart))

    def __eq__(self, other) -> bool:
        return isinstance(other, OmniSection) and self.components() == other.components()

    def __hash__(self):
        return hash(tuple(self.components()))


def section(D: Derivation | None = None, psi: AtiyahForm | None = None) -> OmniSection:
    chart = (D or psi).chart
    if D is None:
        D = Derivation.zero(chart)
    if psi is None:
        psi = AtiyahForm.zero(chart, 1)
    if D.chart is not psi.chart:
        raise ChartMismatch(f"{D.chart} vs {psi.chart}")
    return OmniSection(D, psi)


@dataclass(frozen=True)
class Frame:
    chart: Chart
    gens: tuple[OmniSection, ...]
    samples: tuple[SamplePoint, ...] = field(default=())

    def matrix(self) -> list[list[Scalar]]:
        return [g.components() for g in self.gens]

    def conj(self) -> "Frame":
        return Frame(self.chart, tuple(g.conj() for g in self.gens), self.samples)

    def with_samples(self, samples: Sequence[SamplePoint]) -> "Frame":
        return Frame(self.chart, self.gens, tuple(samples))

    def __len__(self) -> int:
        return len(self.gens)

    def rank(self) -> int:
        return LA.rank(self.matrix()) if self.gens else 0


def make_frame(chart: Chart, gens: Sequence[OmniSection],
               samples: Sequence[SamplePoint] | None = None) -> Frame:
    for g in gens:
        if g.chart is not chart:
            raise ChartMismatch(f"{g.chart} vs {chart}")
    if samples is None:
        samples = chart.default_samples()
    return Frame(chart, tuple(gens), tuple(samples))


# ---- pairing and bracket ------------------------------------------------------

def omni_pair(a: OmniSection, b: OmniSection) -> Scalar:
    if a.chart is not b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")
    return jet_pair(b.psi, a.D) + jet_pair(a.psi, b.D)


def dorfman(a: OmniSection, b: OmniSection) -> OmniSection:
    """``[[(D, psi), (B, chi)]] = ([D, B], L_D chi - i_B d_D psi)``."""
    if a.chart is not b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")
    D = deriv_bracket(a.D, b.D)
    psi = atiyah_lie(a.D, b.psi) - atiyah_interior(b.D, atiyah_d(a.psi))
    return OmniSection(D, psi)


def bfield(B: AtiyahForm, a: OmniSection, check: bool = True) -> OmniSection:
    """``e^B (Delta, psi) = (Delta, psi + i_Delta B)``."""
    if check and not atiyah_d(B).is_zero():
        raise NotClosed("d_D B is not zero")
    return OmniSection(a.D, a.psi + atiyah_interior(a.D, B))


def frame_bfield(B: AtiyahForm, F: Frame, check: bool = True) -> Frame:
    if check and not atiyah_d(B).is_zero():
        raise NotClosed("d_D B is not zero")
    return Frame(F.chart, tuple(bfield(B, g, check=False) for g in F.gens), F.samples)


# ---- standard frames ------------------------------------------------------------

def dr_frame(chart: Chart, samples=None) -> Frame:
    """The derivation summand ``{(d_i, 0), (one, 0)}``."""
    return make_frame(chart, [section(D=D) for D in standard_derivations(chart)], samples)


def jet_frame(chart: Chart, samples=None) -> Frame:
    return make_frame(chart, [section(psi=p) for p in standard_jets(chart)], samples)


def graph_jacobi(Lam: C.Multivector, E: C.Multivector, samples=None) -> Frame:
    chart = Lam.chart
    gens = [OmniSection(jacobi_sharp(Lam, E, psi), psi) for psi in standard_jets(chart)]
    return make_frame(chart, gens, samples)


def graph_atiyah(B: AtiyahForm, samples=None) -> Frame:
    chart = B.chart
    gens = [OmniSection(D, atiyah_interior(D, B)) for D in standard_derivations(chart)]
    return make_frame(chart, gens, samples)


# ---- generator hygiene ----------------------------------------------------------

def clear_denominators(vec: Sequence[Scalar]) -> list[Scalar]:
    """Rescale a coefficient vector by the lcm of its denominators."""
    nz = [e for e in vec if not e.is_zero()]
    if not nz:
        return list(vec)
    if all(e.den.is_ground for e in nz):
        return primitive(vec)
    chart = nz[0].chart
    L = nz[0].den
    for e in nz[1:]:
        if not e.den.is_ground:
            L = L.lcm(e.den)
    s = Scalar._raw(chart, L, chart.ring.zero, chart.ring.one)
    return primitive([e * s for e in vec])


def primitive(vec: Sequence[Scalar]) -> list[Scalar]:
    """Divide a polynomial vector by the gcd of all real and imaginary parts."""
    if not vec or vec[0].chart.ring is None:
        return list(vec)
    polys = [p for e in vec for p in (e.pn, e.qn) if p]
    if not polys or any(not e.is_polynomial() for e in vec):
        return list(vec)
    G = polys[0]
    for p in polys[1:]:
        if G.is_ground:
            break
        G = G.gcd(p)
    if G.is_ground:
        return list(vec)
    chart = vec[0].chart
    return [Scalar._make(chart, e.pn.exquo(G), e.qn.exquo(G), chart.ring.one) for e in vec]


def clean_section(g: OmniSection) -> OmniSection:
    return OmniSection.from_components(g.chart, clear_denominators(g.components()))


def reduce_frame(F: Frame) -> Frame:
    """Keep a generically independent subset of denominator-free generators."""
    gens = [clean_section(g) for g in F.gens if not g.is_zero()]
    if not gens:
        return Frame(F.chart, (), F.samples)
    M = [g.components() for g in gens]
    keep = LA.independent_rows(M)
    return Frame(F.chart, tuple(gens[k] for k in keep), F.samples)


# ---- checkers -----------------------------------------------------------------------

def check_isotropic(F: Frame) -> Report:
    rep = Report("isotropic")
    for i in range(len(F.gens)):
        for j in range(i, len(F.gens)):
            v = omni_pair(F.gens[i], F.gens[j])
            if not v.is_zero():
                rep.fail(f"<<g{i}, g{j}>> = {v}")
    r = F.rank()
    rep.data["rank"] = r
    rep.data["maximal"] = rep.passed and r == F.chart.dim + 1
    if r != len(F.gens):
        rep.note(f"generators are dependent: rank {r} < {len(F.gens)}")
    return rep


def check_maximal_isotropic(F: Frame) -> Report:
    rep = check_isotropic(F)
    rep.name = "maximal isotropic"
    if rep.passed and not rep.data["maximal"]:
        rep.fail(f"rank {rep.data['rank']} != {F.chart.dim + 1}")
    return rep


def upsilon(a: OmniSection, b: OmniSection, c: OmniSection) -> Scalar:
    return omni_pair(a, dorfman(b, c))


def check_involutive(F: Frame) -> Report:
    iso = check_maximal_isotropic(F)
    if not iso.passed:
        raise PreconditionNotMaximalIsotropic("; ".join(iso.witnesses) or "not maximal isotropic")
    rep = Report("involutive")
    gens = F.gens
    for b, c in combinations(range(len(gens)), 2):
        br = dorfman(gens[b], gens[c])
        for a in range(len(gens)):
            if a in (b, c):
                continue
            v = omni_pair(gens[a], br)
            if not v.is_zero():
                rep.fail(f"Upsilon(g{a}, g{b}, g{c}) = {v}")
    return rep


def check_dirac_jacobi(F: Frame) -> Report:
    rep = Report("dirac-jacobi")
    iso = check_maximal_isotropic(F)
    rep.absorb(iso)
    if iso.passed:
        rep.absorb(check_involutive(F))
    return rep


# ---- the canonical 2-form -----------------------------------------------------------

def _columns(F: Frame, part: str) -> list[list[Scalar]]:
    n = F.chart.dim + 1
    rows = []
    for k in range(n):
        row = []
        for g in F.gens:
            comps = g.D.components() if part == "D" else g.psi.components()
            row.append(comps[k])
        rows.append(row)
    return rows


def varpi(F: Frame, D1: Derivation, D2: Derivation, column_order: Sequence[int] | None = None) -> Scalar:
    """``<psi, D2>`` where ``(D1, psi)`` lies in the span of ``F``."""
    A = _columns(F, "D")
    try:
        c = LA.solve(A, D1.components(), column_order)
    except InconsistentSystem:
        raise NotInProjection("derivation is not in the projection of the frame") from None
    psi = AtiyahForm.zero(F.chart, 1)
    for ck, g in zip(c, F.gens):
        if not ck.is_zero():
            psi = psi + g.psi.scale(ck)
    return jet_pair(psi, D2)


# ---- products and backward images ---------------------------------------------------

def _certify(chart: Chart, rows: list[list[Scalar]], samples, what: str) -> None:
    n = chart.dim + 1
    r = LA.rank(rows) if rows else 0
    if r != n:
        raise RankDeficient(f"{what}: generic rank {r} != {n}")
    for pt in samples:
        rp = LA.rank_at(rows, pt)
        if rp != n:
            raise RankDeficient(f"{what}: rank {rp} != {n} at {pt}", point=pt)


def star(F1: Frame, F2: Frame) -> Frame:
    """Fiberwise product ``{(D, psi1 + psi2) : (D, psi_i) in F_i}``."""
    if F1.chart is not F2.chart:
        raise ChartMismatch(f"{F1.chart} vs {F2.chart}")
    chart = F1.chart
    k1 = len(F1.gens)
    A1 = _columns(F1, "D")
    A2 = _columns(F2, "D")
    M = [r1 + [-e for e in r2] for r1, r2 in zip(A1, A2)]
    K = LA.kernel(M, chart, k1 + len(F2.gens))
    gens = []
    for v in K:
        v = clear_denominators(v)
        D = Derivation.zero(chart)
        psi = AtiyahForm.zero(chart, 1)
        for ck, g in zip(v[:k1], F1.gens):
            if not ck.is_zero():
                D = D + g.D.scale(ck)
                psi = psi + g.psi.scale(ck)
        for ck, g in zip(v[k1:], F2.gens):
            if not ck.is_zero():
                psi = psi + g.psi.scale(ck)
        sec = OmniSection(D, psi)
        if not sec.is_zero():
            gens.append(clean_section(sec))
    samples = F1.samples or tuple(chart.default_samples())
    _certify(chart, [g.components() for g in gens], samples, "star product")
    return reduce_frame(Frame(chart, tuple(gens), samples))


def backward_projection(F: Frame, chart: Chart, samples=None) -> Frame:
    """Backward image along the projection ``chart -> F.chart``."""
    if not chart.contains_chart(F.chart):
        raise ChartMismatch(f"{F.chart} is not a factor of {chart}")
    gens = [g.lift(chart) for g in F.gens]
    for name in chart.names:
        if name not in F.chart:
            gens.append(section(D=Derivation.partial(chart, name)))
    return make_frame(chart, gens, samples)


def flat_product(F1: Frame, F2: Frame, samples=None) -> Frame:
    common = set(F1.chart.names) & set(F2.chart.names)
    if common:
        raise CoordinateClash(f"factors share coordinates {sorted(common)}")
    chart = F1.chart.union(F2.chart)
    if samples is None:
        samples = chart.default_samples()
    P1 = backward_projection(F1, chart, samples)
    P2 = backward_projection(F2, chart, samples)
    return star(P1, P2)


def _restrict_point(pt: SamplePoint, sub: Chart) -> SamplePoint:
    vals = pt.as_dict()
    return SamplePoint(sub, tuple(vals[n] for n in sub.names))


def backward_embedding(F: Frame, zero_names: Sequence[str]) -> Frame:
    """Backward image along the embedding ``{zero_names = 0}``."""
    chart = F.chart
    zero_names = list(zero_names)
    if not zero_names:
        return F
    sub = chart.without(zero_names)
    normal = [chart.index(n) for n in zero_names]
    tangent = [k for k in range(chart.dim) if k not in normal]
    n = chart.dim
    samples = tuple(_restrict_point(p, sub) for p in F.samples) or tuple(sub.default_samples())
    rows = []
    for g in F.gens:
        comps = clear_denominators(g.components())
        rows.append([c.restrict(zero_names) for c in comps])
    normal_block = [[row[k] for k in normal] for row in rows]
    r = LA.rank(normal_block)
    for pt in samples:
        rp = LA.rank_at(normal_block, pt)
        if rp != r:
            raise CleanIntersectionFailed(
                f"clean intersection rank {rp} != {r} at {pt}", point=pt)
    # combinations whose derivation symbol is tangent to the subspace
    T = LA.transpose(normal_block)
    K = LA.kernel(T, sub, len(rows)) if r or T else LA.identity(sub, len(rows))
    if not T:
        K = LA.identity(sub, len(rows))
    gens = []
    for v in K:
        v = clear_denominators(v)
        acc = [sub.zero] * (2 * (n + 1))
        for ck, row in zip(v, rows):
            if not ck.is_zero():
                acc = [a + ck * b for a, b in zip(acc, row)]
        Dpart = [acc[k] for k in tangent] + [acc[n]]
        Jpart = [acc[n + 1 + k] for k in tangent] + [acc[2 * n + 1]]
        sec = OmniSection.from_components(sub, Dpart + Jpart)
        if not sec.is_zero():
            gens.append(clean_section(sec))
    out = Frame(sub, tuple(gens), samples)
    full = sub.dim + 1
    if LA.rank([g.components() for g in gens]) != full:
        raise CleanIntersectionFailed("backward image is not of full rank")
    return reduce_frame(out)


# ---- comparison -------------------------------------------------------------------

def _cleared(F: Frame) -> list[list[Scalar]]:
    return [clear_denominators(g.components()) for g in F.gens]


def reorder(F: Frame, chart: Chart) -> Frame:
    """Re-read a frame on a chart with the same coordinates in another order."""
    if F.chart is chart:
        return F
    if set(F.chart.names) != set(chart.names):
        raise ChartMismatch(f"{F.chart} vs {chart}")
    samples = tuple(SamplePoint(chart, tuple(p.as_dict()[n] for n in chart.names)) for p in F.samples)
    return Frame(chart, tuple(g.lift(chart) for g in F.gens), samples)


def frame_equal(F1: Frame, F2: Frame) -> bool:
    F2 = reorder(F2, F1.chart)
    M1, M2 = _cleared(F1), _cleared(F2)
    r1, r2 = LA.rank(M1), LA.rank(M2)
    if r1 != r2 or LA.rank(M1 + M2) != r1:
        return False
    pts = list(dict.fromkeys(list(F1.samples) + list(F2.samples)))
    for pt in pts:
        a, b = LA.rank_at(M1, pt), LA.rank_at(M2, pt)
        if a != b or LA.rank_at(M1 + M2, pt) != a:
            return False
    return True


def in_span(F: Frame, a: OmniSection) -> bool:
    M = F.matrix()
    return LA.rank(M + [a.components()]) == LA.rank(M)


def intersection_with_conjugate(F: Frame) -> list[OmniSection]:
    """Basis of ``L cap conj(L)`` over the fraction field."""
    G = F.gens
    Gb = F.conj().gens
    k = len(G)
    cols = [g.components() for g in G] + [[-e for e in g.components()] for g in Gb]
    M = LA.transpose(cols)
    K = LA.kernel(M, F.chart, 2 * k)
    out = []
    for v in K:
        v = clear_denominators(v)
        acc = None
        for ck, g in zip(v[:k], G):
            if ck.is_zero():
                continue
            t = g.scale(ck)
            acc = t if acc is None else acc + t
        if acc is not None and not acc.is_zero():
            out.append(acc)
    if not out:
        return []
    rows = [a.components() for a in out]
    keep = LA.independent_rows(rows)
    return [out[i] for i in keep]
