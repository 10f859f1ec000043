"""Gauge algebroid calculus of the trivial line bundle.

Derivations are ``X + f`` (``one`` is ``0 + 1``), 1-jets are ``eta + g j`` and
Atiyah k-forms are ``w0 + w1 ^ j`` with ``j`` placed after every chart
differential.  All operator formulas below follow from that placement.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import cartan as C
from .cartan import Endo, Form, Multivector
from .errors import ChartMismatch, CoordinateClash
from .scalars import Chart, Scalar


@dataclass(frozen=True)
class Derivation:
    X: Multivector
    f: Scalar

    @property
    def chart(self) -> Chart:
        return self.f.chart

    @classmethod
    def one(cls, chart: Chart) -> "Derivation":
        return cls(C.zero_multivector(chart, 1), chart.one)

    @classmethod
    def zero(cls, chart: Chart) -> "Derivation":
        return cls(C.zero_multivector(chart, 1), chart.zero)

    @classmethod
    def partial(cls, chart: Chart, name: str) -> "Derivation":
        return cls(C.partial(chart, name), chart.zero)

    @classmethod
    def from_vector(cls, X: Multivector) -> "Derivation":
        return cls(X, X.chart.zero)

    @classmethod
    def from_components(cls, chart: Chart, comps) -> "Derivation":
        """From ``[X^1, ..., X^n, f]``."""
        return cls(C.vector(chart, comps[:-1]), comps[-1])

    def components(self) -> list[Scalar]:
        return C.components(self.X) + [self.f]

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.X + other.X, self.f + other.f)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.X - other.X, self.f - other.f)

    def __neg__(self) -> "Derivation":
        return Derivation(-self.X, -self.f)

    def scale(self, s) -> "Derivation":
        return Derivation(self.X.scale(s), self.f * s)

    def conj(self) -> "Derivation":
        return Derivation(self.X.conj(), self.f.conj())

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.f.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, Derivation) and self.X == other.X and self.f == other.f

    def __hash__(self):
        return hash((self.X, self.f))


@dataclass(frozen=True)
class AtiyahForm:
    """``w0 + w1 ^ j`` with ``deg w0 = k`` and ``deg w1 = k - 1``."""

    w0: Form
    w1: Form

    @property
    def chart(self) -> Chart:
        return self.w0.chart

    @property
    def degree(self) -> int:
        return self.w0.degree

    @classmethod
    def make(cls, w0: Form, w1: Form | None = None) -> "AtiyahForm":
        if w1 is None:
            w1 = C.zero_form(w0.chart, w0.degree - 1)
        if w1.chart is not w0.chart:
            raise ChartMismatch(f"{w0.chart} vs {w1.chart}")
        if not w0.is_zero() and not w1.is_zero() and w1.degree != w0.degree - 1:
            raise ValueError("inconsistent Atiyah form degrees")
        if w0.is_zero() and not w1.is_zero():
            w0 = C.zero_form(w0.chart, w1.degree + 1)
        elif w1.is_zero():
            w1 = C.zero_form(w0.chart, w0.degree - 1)
        return cls(w0, w1)

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "AtiyahForm":
        return cls(C.zero_form(chart, degree), C.zero_form(chart, degree - 1))

    @classmethod
    def function(cls, f: Scalar) -> "AtiyahForm":
        return cls.make(C.scalar_form(f))

    @classmethod
    def j(cls, chart: Chart) -> "AtiyahForm":
        """The jet ``j = j^1(1)``."""
        return cls(C.zero_form(chart, 1), C.scalar_form(chart.one))

    @classmethod
    def embed(cls, w: Form) -> "AtiyahForm":
        return cls.make(w)

    def __add__(self, other: "AtiyahForm") -> "AtiyahForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("adding Atiyah forms of different degree")
        return AtiyahForm(self.w0 + other.w0, self.w1 + other.w1)

    def __neg__(self) -> "AtiyahForm":
        return AtiyahForm(-self.w0, -self.w1)

    def __sub__(self, other: "AtiyahForm") -> "AtiyahForm":
        return self + (-other)

    def scale(self, s) -> "AtiyahForm":
        return AtiyahForm(self.w0.scale(s), self.w1.scale(s))

    def conj(self) -> "AtiyahForm":
        return AtiyahForm(self.w0.conj(), self.w1.conj())

    def is_zero(self) -> bool:
        return self.w0.is_zero() and self.w1.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtiyahForm):
            return NotImplemented
        if self.chart is not other.chart:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.w0 == other.w0 and self.w1 == other.w1

    def __hash__(self):
        return hash((self.w0, self.w1))

    def wedge(self, other: "AtiyahForm") -> "AtiyahForm":
        """``(a0 + a1 j) ^ (b0 + b1 j) = a0 b0 + (a0 b1 + (-1)^{|b0|} a1 b0) j``."""
        a0, a1, b0, b1 = self.w0, self.w1, other.w0, other.w1
        w0 = a0.wedge(b0)
        t1 = a0.wedge(b1)
        t2 = a1.wedge(b0)
        if other.degree % 2:
            t2 = -t2
        w1 = t1 + t2 if not t1.is_zero() else t2
        if w1.is_zero():
            w1 = C.zero_form(self.chart, self.degree + other.degree - 1)
        if w0.is_zero():
            w0 = C.zero_form(self.chart, self.degree + other.degree)
        return AtiyahForm(w0, w1)

    def __xor__(self, other):
        return self.wedge(other)

    def lift(self, chart: Chart) -> "AtiyahForm":
        return AtiyahForm(self.w0.lift(chart), self.w1.lift(chart))

    # jet view -------------------------------------------------------------
    @property
    def eta(self) -> Form:
        return self.w0

    @property
    def g(self) -> Scalar:
        return C.function_of(self.w1)

    def components(self) -> list[Scalar]:
        """Jet coordinates ``[eta_1, ..., eta_n, g]`` of an Atiyah 1-form."""
        if self.degree != 1 and not self.is_zero():
            raise ValueError("components() needs an Atiyah 1-form")
        return C.components(self.w0) + [self.g]

    def __repr__(self) -> str:
        return f"AtiyahForm({render_atiyah(self)})"


Jet = AtiyahForm


def jet(eta: Form, g: Scalar) -> AtiyahForm:
    return AtiyahForm.make(eta, C.scalar_form(g))


def jet_from_components(chart: Chart, comps) -> AtiyahForm:
    return jet(C.one_form(chart, comps[:-1]), comps[-1])


def j1(f: Scalar) -> AtiyahForm:
    """First jet prolongation ``df + f j``."""
    return jet(C.d(C.scalar_form(f)), f)


# ---- derivations ------------------------------------------------------------

def deriv_apply(D: Derivation, lam: Scalar) -> Scalar:
    if lam.chart is not D.chart:
        raise ChartMismatch(f"{D.chart} vs {lam.chart}")
    return C.vector_apply(D.X, lam) + D.f * lam


def deriv_bracket(D1: Derivation, D2: Derivation) -> Derivation:
    if D1.chart is not D2.chart:
        raise ChartMismatch(f"{D1.chart} vs {D2.chart}")
    return Derivation(C.lie_bracket(D1.X, D2.X),
                      C.vector_apply(D1.X, D2.f) - C.vector_apply(D2.X, D1.f))


def jet_pair(psi: AtiyahForm, D: Derivation) -> Scalar:
    if psi.chart is not D.chart:
        raise ChartMismatch(f"{psi.chart} vs {D.chart}")
    return C.pair(psi.w0, D.X) + psi.g * D.f


# ---- Atiyah forms -------------------------------------------------------------

def atiyah_d(w: AtiyahForm) -> AtiyahForm:
    """``d_D w = d w0 + (d w1 + (-1)^{|w0|} w0) ^ j``."""
    k = w.degree
    w0 = C.d(w.w0)
    w1 = C.d(w.w1) if w.w1.degree >= 0 else C.zero_form(w.chart, k)
    w1 = w1 + (w.w0 if k % 2 == 0 else -w.w0) if not w.w0.is_zero() else w1
    if w0.is_zero():
        w0 = C.zero_form(w.chart, k + 1)
    if w1.is_zero():
        w1 = C.zero_form(w.chart, k)
    return AtiyahForm(w0, w1)


def atiyah_interior(D: Derivation, w: AtiyahForm) -> AtiyahForm:
    """``i_{X+f} w = i_X w0 + (-1)^{|w1|} f w1 + (i_X w1) ^ j``."""
    if D.chart is not w.chart:
        raise ChartMismatch(f"{D.chart} vs {w.chart}")
    k = w.degree
    if k == 0:
        return AtiyahForm.zero(w.chart, -1)
    a = C.interior(D.X, w.w0)
    b = w.w1.scale(D.f) if (k - 1) % 2 == 0 else w.w1.scale(-D.f)
    w0 = a + b if not a.is_zero() else b
    if w.w1.degree >= 1:
        w1 = C.interior(D.X, w.w1)
    else:
        w1 = C.zero_form(w.chart, k - 2)
    if w0.is_zero():
        w0 = C.zero_form(w.chart, k - 1)
    if w1.is_zero():
        w1 = C.zero_form(w.chart, k - 2)
    return AtiyahForm(w0, w1)


def atiyah_lie(D: Derivation, w: AtiyahForm) -> AtiyahForm:
    """``L_{X+f} w = L_X w0 + f w0 + w1 ^ df + (L_X w1 + f w1) ^ j``."""
    if D.chart is not w.chart:
        raise ChartMismatch(f"{D.chart} vs {w.chart}")
    k = w.degree
    df = C.d(C.scalar_form(D.f))
    w0 = C.lie_form(D.X, w.w0) + w.w0.scale(D.f)
    if w.w1.degree >= 0 and not w.w1.is_zero():
        w0 = w0 + w.w1.wedge(df)
        w1 = C.lie_form(D.X, w.w1) + w.w1.scale(D.f)
    else:
        w1 = C.zero_form(w.chart, k - 1)
    if w0.is_zero():
        w0 = C.zero_form(w.chart, k)
    if w1.is_zero():
        w1 = C.zero_form(w.chart, k - 1)
    return AtiyahForm(w0, w1)


def atiyah_evaluate(w: AtiyahForm, *Ds: Derivation) -> Scalar:
    out = w
    for D in Ds:
        out = atiyah_interior(D, out)
    if out.degree != 0:
        raise ValueError("wrong number of arguments")
    return C.function_of(out.w0)


def atiyah_flat_matrix(w: AtiyahForm) -> list[list[Scalar]]:
    """Matrix of ``Delta -> i_Delta w`` in the frames ``{d_i, one}`` and ``{dx^i, j}``.

    Column ``b`` holds the jet coordinates of ``i_{e_b} w``.
    """
    chart = w.chart
    frame = standard_derivations(chart)
    cols = [atiyah_interior(D, w).components() for D in frame]
    n = chart.dim + 1
    return [[cols[b][a] for b in range(n)] for a in range(n)]


def standard_derivations(chart: Chart) -> list[Derivation]:
    return [Derivation.partial(chart, n) for n in chart.names] + [Derivation.one(chart)]


def standard_jets(chart: Chart) -> list[AtiyahForm]:
    return [jet(C.dcoord(chart, n), chart.zero) for n in chart.names] + [AtiyahForm.j(chart)]


# ---- connections ----------------------------------------------------------------

@dataclass(frozen=True)
class Connection:
    """``nabla_X = X + gamma(X)`` in the trivialization."""

    gamma: Form

    def curvature(self) -> Form:
        return C.d(self.gamma)

    def is_flat(self) -> bool:
        return self.curvature().is_zero()

    def derivation(self, X: Multivector) -> Derivation:
        return Derivation(X, C.pair(self.gamma, X))

    def d_nabla(self, a: Form) -> Form:
        """``d a + gamma ^ a``."""
        return C.d(a) + self.gamma.wedge(a)


def connection_ops(gamma: Form) -> dict:
    conn = Connection(gamma)
    return {"flat": conn.is_flat(), "curvature": conn.curvature(), "d_nabla": conn.d_nabla}


# ---- homogenization -------------------------------------------------------------

def extended_chart(chart: Chart, t: str = "t") -> Chart:
    if t in chart:
        raise CoordinateClash(f"coordinate {t!r} already in {chart}")
    return Chart(chart.names + (t,))


def homogenize_scalar(lam: Scalar, t: str = "t") -> Scalar:
    ext = extended_chart(lam.chart, t)
    return lam.lift(ext) * ext.coord(t)


def homogenize(D: Derivation, t: str = "t") -> Multivector:
    """``X + f  ->  X + f t d_t`` on the chart extended by ``t``."""
    ext = extended_chart(D.chart, t)
    comps = [c.lift(ext) for c in C.components(D.X)]
    comps.append(D.f.lift(ext) * ext.coord(t))
    return C.vector(ext, comps)


def homogenize_endo(phi: list[list[Scalar]], chart: Chart, t: str = "t") -> Endo:
    """Lift an endomorphism of ``D R_M`` (matrix in the frame ``{d_i, one}``).

    ``phi~`` is the (1,1)-tensor with ``phi~(Delta~) = (phi Delta)~``; since
    ``one~ = t d_t`` the last column is divided by ``t`` and the last row
    multiplied by ``t``.
    """
    ext = extended_chart(chart, t)
    tt = ext.coord(t)
    n = chart.dim
    M = []
    for a in range(n + 1):
        row = []
        for b in range(n + 1):
            e = phi[a][b].lift(ext)
            if a == n and b < n:
                e = e * tt
            elif b == n and a < n:
                e = e / tt
            row.append(e)
        M.append(row)
    return Endo(ext, M)


def euler_field(chart: Chart, t: str = "t") -> Multivector:
    """``E = t d_t`` on an extended chart."""
    comps = [chart.zero] * chart.dim
    comps[chart.index(t)] = chart.coord(t)
    return C.vector(chart, comps)


def render_atiyah(w: AtiyahForm) -> str:
    if w.is_zero():
        return "0"
    parts = []
    if not w.w0.is_zero():
        parts.append(C.render_anti(w.w0))
    if not w.w1.is_zero():
        inner = C.render_anti(w.w1)
        if w.w1.degree == 0:
            f = C.function_of(w.w1)
            from .scalars import render

            s = render(f)
            parts.append("j" if s == "1" else f"({s})*j")
        else:
            parts.append(f"({inner})^j")
    return " + ".join(parts)


def render_derivation(D: Derivation) -> str:
    from .scalars import render

    parts = []
    if not D.X.is_zero():
        parts.append(C.render_anti(D.X))
    if not D.f.is_zero():
        s = render(D.f)
        parts.append("one" if s == "1" else f"({s})*one")
    return " + ".join(parts) if parts else "0"
