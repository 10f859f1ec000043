"""Almost contact data and complex structures on the gauge algebroid."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .. import cartan as C
from .. import linalg as LA
from ..atiyah import Derivation, deriv_bracket, homogenize_endo, standard_derivations
from ..cartan import Endo, Form, Multivector
from ..errors import ChartMismatch
from ..report import Report
from ..scalars import Chart, Scalar

Matrix = list[list[Scalar]]


@dataclass(frozen=True)
class ACQuadruple:
    """``phi(X, r) = (Phi X - r xi, eta(X) + g r)``; a triple when ``g = 0``."""

    Phi: Endo
    xi: Multivector
    eta: Form
    g: Scalar | None = None

    @property
    def chart(self) -> Chart:
        return self.Phi.chart

    @property
    def gval(self) -> Scalar:
        return self.g if self.g is not None else self.chart.zero


NACS = ACQuadruple


# ---- gauge endomorphisms as matrices in {d_i, one} ---------------------------------

def gauge_apply(phi: Matrix, D: Derivation) -> Derivation:
    return Derivation.from_components(D.chart, LA.matvec(phi, D.components()))


def to_phi(t: ACQuadruple) -> Matrix:
    chart = t.chart
    n = chart.dim
    xi = C.components(t.xi)
    eta = C.components(t.eta)
    M = [[t.Phi.M[a][b] for b in range(n)] + [-xi[a]] for a in range(n)]
    M.append(list(eta) + [t.gval])
    return M


def from_phi(chart: Chart, phi: Matrix) -> ACQuadruple:
    n = chart.dim
    Phi = Endo(chart, [row[:n] for row in phi[:n]])
    xi = C.vector(chart, [-phi[a][n] for a in range(n)])
    eta = C.one_form(chart, phi[n][:n])
    return ACQuadruple(Phi, xi, eta, phi[n][n])


def gauge_transform(t: ACQuadruple, f: Scalar) -> ACQuadruple:
    """Effect of the line bundle automorphism ``r -> e^{-f} r``."""
    df = C.d(C.scalar_form(f))
    xf = C.vector_apply(t.xi, f)
    Phi = t.Phi + Endo.tensor(df, t.xi)
    eta = t.eta + t.Phi.dual_apply(df) + df.scale(xf - t.gval)
    return ACQuadruple(Phi, t.xi, eta, t.gval - xf)


def gauge_conjugate(phi: Matrix, f: Scalar) -> Matrix:
    """``T phi T^-1`` for ``T(X, r) = (X, r + X(f))``."""
    chart = f.chart
    n = chart.dim
    grad = [f.diff(a) for a in chart.names]
    T = LA.identity(chart, n + 1)
    Ti = LA.identity(chart, n + 1)
    for b in range(n):
        T[n][b] = grad[b]
        Ti[n][b] = -grad[b]
    return LA.matmul(T, LA.matmul(phi, Ti))


# ---- checks ----------------------------------------------------------------------------

def check_almost_contact(t: ACQuadruple) -> Report:
    chart = t.chart
    rep = Report("almost contact")
    I = Endo.identity(chart)
    d1 = t.Phi @ t.Phi + I - Endo.tensor(t.eta, t.xi)
    if not d1.is_zero():
        rep.fail(f"Phi^2 + id - eta(x)xi = {d1.M}")
    d2 = t.Phi.apply(t.xi)
    if not d2.is_zero():
        rep.fail(f"Phi xi = {C.render_anti(d2)}")
    d3 = t.Phi.dual_apply(t.eta)
    if not d3.is_zero():
        rep.fail(f"eta o Phi = {C.render_anti(d3)}")
    d4 = C.pair(t.eta, t.xi) - 1
    if not d4.is_zero():
        rep.fail(f"eta(xi) - 1 = {d4}")
    return rep


def normality_defects(t: ACQuadruple) -> dict[str, object]:
    chart = t.chart
    deta = C.d(t.eta)
    basis = [C.partial(chart, a) for a in chart.names]
    N = C.nijenhuis11(t.Phi)
    first = {}
    for i, j in combinations(range(chart.dim), 2):
        v = N.get((i, j), C.zero_multivector(chart, 1)) + t.xi.scale(C.evaluate_form(deta, basis[i], basis[j]))
        if not v.is_zero():
            first[(i, j)] = v
    second = {}
    for i, j in combinations(range(chart.dim), 2):
        v = (C.evaluate_form(deta, t.Phi.apply(basis[i]), basis[j])
             + C.evaluate_form(deta, basis[i], t.Phi.apply(basis[j])))
        if not v.is_zero():
            second[(i, j)] = v
    return {
        "N_Phi + d eta (x) xi": first,
        "d eta(Phi-,-) + d eta(-,Phi-)": second,
        "L_xi Phi": C.lie_endo(t.xi, t.Phi),
        "L_xi eta": C.lie_form(t.xi, t.eta),
    }


def _nonzero(v) -> bool:
    if isinstance(v, dict):
        return bool(v)
    return not v.is_zero()


def check_nacs(t: ACQuadruple) -> Report:
    rep = Report("normal almost contact")
    rep.absorb(check_almost_contact(t))
    defects = normality_defects(t)
    for name, v in defects.items():
        if _nonzero(v):
            rep.fail(f"{name} != 0")
    rep.data["defects"] = defects
    if rep.passed:
        # consistency with the gauge-algebroid picture
        dl = check_dl_complex(to_phi(t), t.chart)
        rep.data["dl_complex"] = dl.passed
        if not dl.passed:
            rep.absorb(dl)
    return rep


def nacs_ops(t: ACQuadruple) -> dict:
    return {
        "check": check_nacs(t),
        "to_phi": to_phi(t),
        "gauge_transform": lambda f: gauge_transform(t, f),
    }


def dl_torsion(phi: Matrix, D1: Derivation, D2: Derivation) -> Derivation:
    pD1, pD2 = gauge_apply(phi, D1), gauge_apply(phi, D2)
    return (deriv_bracket(pD1, pD2) - deriv_bracket(D1, D2)
            - gauge_apply(phi, deriv_bracket(pD1, D2) + deriv_bracket(D1, pD2)))


def dl_torsion_table(phi: Matrix, chart: Chart) -> dict[tuple[int, int], Derivation]:
    frame = standard_derivations(chart)
    out = {}
    for a, b in combinations(range(len(frame)), 2):
        v = dl_torsion(phi, frame[a], frame[b])
        if not v.is_zero():
            out[(a, b)] = v
    return out


def check_dl_complex(phi: Matrix, chart: Chart, seed: int = 7) -> Report:
    rep = Report("gauge algebroid complex structure")
    if len(phi) != chart.dim + 1:
        raise ChartMismatch(f"matrix size {len(phi)} does not fit {chart}")
    sq = LA.matmul(phi, phi)
    for a, row in enumerate(sq):
        for b, e in enumerate(row):
            if e != (-1 if a == b else 0):
                rep.fail(f"phi^2 + id at ({a},{b}) = {e + (1 if a == b else 0)}")
    tab = dl_torsion_table(phi, chart)
    for (a, b), v in tab.items():
        rep.fail(f"N_phi(e{a}, e{b}) = {v.components()}")
    # spot-check bilinearity over functions
    rng = random.Random(seed)
    frame = standard_derivations(chart)
    if chart.dim:
        xs = chart.coords()
        h = chart.one + xs[rng.randrange(chart.dim)] * rng.randint(1, 5)
        a, b = rng.randrange(len(frame)), rng.randrange(len(frame))
        lhs = dl_torsion(phi, frame[a].scale(h), frame[b])
        rhs = dl_torsion(phi, frame[a], frame[b]).scale(h)
        if lhs != rhs:
            rep.fail("torsion is not tensorial on the spot-check")
    rep.data["torsion"] = tab
    return rep


def homogenized_torsion(phi: Matrix, chart: Chart, t: str = "t") -> dict:
    """Nijenhuis torsion of the homogenized (1,1)-tensor on the chart extended by ``t``."""
    return C.nijenhuis11(homogenize_endo(phi, chart, t))
