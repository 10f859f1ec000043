"""The Dolbeault-Atiyah bicomplex of ``phi_can`` on ``R x C^n``.

Work happens on the formal chart ``(u, z1..zn, zb1..zbn)`` where ``z`` and
``zb`` are independent variables; ``d`` is then the honest exterior
derivative.  With ``phi one = d_u`` and ``phi d_x = d_y`` the ``+i``
eigenbundle is spanned by ``box = (one - i d_u)/2`` and ``d_z``, and the dual
coframes are ``{k, dz}`` and ``{kb, dzb}`` with

    k = j + i du,    kb = j - i du.

An Atiyah form is handled internally as a dict over the generators
``[du, dz.., dzb.., j]``; changing to ``[k, dz.., dzb.., kb]`` exposes the
bidegree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import cartan as C
from .atiyah import AtiyahForm, Derivation, atiyah_d
from .cartan import Form, merge_sign
from .errors import NotClosed, NotHoloChart
from .scalars import Chart, Scalar

Comps = dict[tuple[int, ...], Scalar]


# ---- charts --------------------------------------------------------------------------

def holo_names(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("u", "z", "zb")
    return ("u",) + tuple(f"z{i}" for i in range(1, n + 1)) + tuple(f"zb{i}" for i in range(1, n + 1))


def real_names(n: int) -> tuple[str, ...]:
    if n == 1:
        return ("u", "x", "y")
    return ("u",) + tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"y{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class HoloChart:
    n: int

    @property
    def chart(self) -> Chart:
        return Chart(holo_names(self.n))

    @property
    def real_chart(self) -> Chart:
        return Chart(real_names(self.n))

    @property
    def z(self) -> list[str]:
        return list(holo_names(self.n)[1:1 + self.n])

    @property
    def zb(self) -> list[str]:
        return list(holo_names(self.n)[1 + self.n:])

    @classmethod
    def of(cls, chart: Chart) -> "HoloChart":
        if chart.dim % 2 == 1 and chart.dim >= 3:
            n = (chart.dim - 1) // 2
            if chart.names == holo_names(n):
                return cls(n)
        raise NotHoloChart(f"{chart} is not a holomorphic chart (u, z.., zb..)")


def _holo(w: AtiyahForm) -> HoloChart:
    return HoloChart.of(w.chart)


# ---- generator bookkeeping --------------------------------------------------------------

def _to_comps(w: AtiyahForm) -> tuple[Comps, int]:
    N = w.chart.dim
    out: Comps = dict(w.w0.comps)
    if w.w1 is not None:
        for k, v in w.w1.comps.items():
            out[k + (N,)] = v
    return out, w.degree


def _from_comps(chart: Chart, comps: Comps, degree: int) -> AtiyahForm:
    N = chart.dim
    w0, w1 = {}, {}
    for k, v in comps.items():
        if v.is_zero():
            continue
        if k and k[-1] == N:
            w1[k[:-1]] = v
        else:
            w0[k] = v
    f1 = Form(chart, degree - 1, w1) if degree >= 1 else None
    return AtiyahForm.make(Form(chart, degree, w0), f1)


def change_generators(comps: Comps, L: dict[int, dict[int, Scalar]]) -> Comps:
    """Substitute each generator ``a`` by ``sum_b L[a][b] e_b`` (identity if absent)."""
    out: Comps = {}
    for key, c in comps.items():
        terms: dict[tuple[int, ...], Scalar] = {(): c}
        for a in key:
            img = L.get(a, None)
            nxt: dict[tuple[int, ...], Scalar] = {}
            for J, v in terms.items():
                for b, l in (img.items() if img is not None else [(a, None)]):
                    m = merge_sign(J, (b,))
                    if m is None:
                        continue
                    s, K = m
                    val = v if l is None else v * l
                    if s < 0:
                        val = -val
                    nxt[K] = nxt[K] + val if K in nxt else val
            terms = nxt
        for K, v in terms.items():
            out[K] = out[K] + v if K in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _k_maps(chart: Chart) -> tuple[dict, dict]:
    """Forward ``(du, j) -> (k, kb)`` and backward maps; index 0 is u, index N is j."""
    N = chart.dim
    i = chart.i
    half = chart.const(Fraction(1, 2))
    fwd = {0: {0: -i * half, N: i * half}, N: {0: half, N: half}}
    bwd = {0: {N: chart.one, 0: i}, N: {N: chart.one, 0: -i}}
    return fwd, bwd


def _bidegree(key: tuple[int, ...], n: int) -> tuple[int, int]:
    N = 2 * n + 1
    r = sum(1 for a in key if a == 0 or 1 <= a <= n)
    s = sum(1 for a in key if a == N or n < a < N)
    return r, s


def bigraded(w: AtiyahForm) -> dict[tuple[int, int], AtiyahForm]:
    """All nonzero ``(r, s)`` components of ``w``."""
    h = _holo(w)
    chart = w.chart
    comps, deg = _to_comps(w)
    fwd, bwd = _k_maps(chart)
    kc = change_generators(comps, fwd)
    buckets: dict[tuple[int, int], Comps] = {}
    for k, v in kc.items():
        buckets.setdefault(_bidegree(k, h.n), {})[k] = v
    return {rs: _from_comps(chart, change_generators(c, bwd), deg) for rs, c in buckets.items()}


def bidegree_project(w: AtiyahForm, r: int, s: int) -> AtiyahForm:
    parts = bigraded(w)
    return parts.get((r, s), AtiyahForm.zero(w.chart, w.degree))


def box(chart: Chart) -> Derivation:
    """``(one - i d_u) / 2``."""
    HoloChart.of(chart)
    half = chart.const(Fraction(1, 2))
    return Derivation(C.partial(chart, "u").scale(-chart.i * half), half)


def k_form(chart: Chart) -> AtiyahForm:
    """``k = j + i du``."""
    return AtiyahForm.j(chart) + AtiyahForm.embed(C.dcoord(chart, "u").scale(chart.i))


def kbar_form(chart: Chart) -> AtiyahForm:
    return AtiyahForm.j(chart) - AtiyahForm.embed(C.dcoord(chart, "u").scale(chart.i))


# ---- k-decompositions -------------------------------------------------------------------

@dataclass(frozen=True)
class KDecomposition:
    """``w = w0 + w1 ^ k`` (or ``^ kb`` when ``bar``)."""

    w0: Form
    w1: Form | None
    bar: bool = False

    def recompose(self) -> AtiyahForm:
        chart = self.w0.chart
        if self.w1 is None:
            return AtiyahForm.make(self.w0)
        du = C.dcoord(chart, "u")
        s = -chart.i if self.bar else chart.i
        # w1 ^ (j + s du) = w1 ^ j + s w1 ^ du
        return AtiyahForm.make(self.w0 + self.w1.wedge(du).scale(s), self.w1)


def _decompose(w: AtiyahForm, bar: bool) -> KDecomposition:
    _holo(w)
    chart = w.chart
    if w.w1 is None:
        return KDecomposition(w.w0, None, bar)
    du = C.dcoord(chart, "u")
    s = -chart.i if bar else chart.i
    return KDecomposition(w.w0 - w.w1.wedge(du).scale(s), w.w1, bar)


def k_decompose(w: AtiyahForm) -> KDecomposition:
    return _decompose(w, bar=False)


def kbar_decompose(w: AtiyahForm) -> KDecomposition:
    return _decompose(w, bar=True)


# ---- operators on ordinary forms in (du, dz, dzb) -----------------------------------------

def _partial_in(w: Form, names: Iterable[str]) -> Form:
    chart = w.chart
    out = C.zero_form(chart, w.degree + 1)
    for name in names:
        dv = w.map_scalars(lambda c, name=name: c.diff(name))
        if not dv.is_zero():
            out = out + C.dcoord(chart, name).wedge(dv)
    return out


def dbar(w: Form) -> Form:
    """``sum dzb_i ^ d/dzb_i``; ``u`` is a parameter."""
    return _partial_in(w, HoloChart.of(w.chart).zb)


def dhol(w: Form) -> Form:
    return _partial_in(w, HoloChart.of(w.chart).z)


def lie_Y(w: Form) -> Form:
    """``L_Y`` with ``Y = (i/2) d_u``: acts on coefficients only."""
    c = w.chart.i * w.chart.const(Fraction(1, 2))
    return w.map_scalars(lambda s: c * s.diff("u"))


def _half_plus_LY(w: Form) -> Form:
    return w.scale(w.chart.const(Fraction(1, 2))) + lie_Y(w)


def _inv_half_plus_LY(w: Form) -> Form:
    """``(1/2 + (i/2) d_u)^-1 = 2 sum (-i d_u)^m`` on polynomial coefficients."""
    chart = w.chart
    mi = -chart.i
    acc = C.zero_form(chart, w.degree)
    term = w
    while not term.is_zero():
        acc = acc + term
        term = term.map_scalars(lambda s: mi * s.diff("u"))
    return acc.scale(chart.const(2))


# ---- the Dolbeault-Atiyah operators -------------------------------------------------------

def dbar_D(w: AtiyahForm) -> AtiyahForm:
    """``dbar w0 + (dbar w1 + (-1)^|w0| (w0/2 + L_Y w0)) ^ kb`` for ``w = w0 + w1 ^ kb``."""
    dec = kbar_decompose(w)
    chart = w.chart
    w0 = dec.w0
    w1 = dec.w1 if dec.w1 is not None else C.zero_form(chart, w0.degree - 1) if w0.degree else None
    new0 = dbar(w0)
    t = _half_plus_LY(w0)
    if w0.degree % 2:
        t = -t
    new1 = t if w1 is None else dbar(w1) + t
    return KDecomposition(new0, new1, bar=True).recompose()


def dbar_D_projected(w: AtiyahForm) -> AtiyahForm:
    """``dbar_D`` as the ``(r, s+1)`` part of ``d_D`` on each ``(r, s)`` piece."""
    out = AtiyahForm.zero(w.chart, w.degree + 1)
    for (r, s), piece in bigraded(w).items():
        out = out + bidegree_project(atiyah_d(piece), r, s + 1)
    return out


def partial_D(w: AtiyahForm) -> AtiyahForm:
    """``d_D - dbar_D``."""
    return atiyah_d(w) - dbar_D(w)


def partial_D_projected(w: AtiyahForm) -> AtiyahForm:
    out = AtiyahForm.zero(w.chart, w.degree + 1)
    for (r, s), piece in bigraded(w).items():
        out = out + bidegree_project(atiyah_d(piece), r + 1, s)
    return out


# ---- solvers ----------------------------------------------------------------------------

def _antiderivative(c: Scalar, name: str) -> Scalar:
    """Termwise antiderivative of a polynomial in the variable ``name``."""
    if not c.is_polynomial():
        raise ValueError("polynomial coefficients required")
    chart = c.chart
    k = chart.index(name)
    ring = chart.ring

    def integ(p):
        out = ring.zero
        for mon, coef in p.terms():
            e = list(mon)
            e[k] += 1
            out += ring({tuple(e): coef / e[k]})
        return out

    return Scalar._make(chart, integ(c.pn), integ(c.qn), ring.one)


def _has_gen(key: tuple[int, ...], idx: int) -> bool:
    return idx in key


def dbar_poly_solve(alpha: Form, check: bool = True) -> Form:
    """``beta`` with ``dbar beta = alpha`` for a ``dbar``-closed polynomial form."""
    h = HoloChart.of(alpha.chart)
    chart = alpha.chart
    if check and not dbar(alpha).is_zero():
        raise NotClosed("dbar alpha != 0")
    if alpha.degree == 0:
        if alpha.is_zero():
            return alpha
        raise NotClosed("a nonzero function is not dbar-exact")
    beta = C.zero_form(chart, alpha.degree - 1)
    rest = alpha
    for name in reversed(h.zb):
        if rest.is_zero():
            break
        m = chart.index(name)
        # rest = dzb_m ^ A + B with A, B free of dzb_m
        A = {}
        for key, v in rest.comps.items():
            if m in key:
                pos = key.index(m)
                sub = key[:pos] + key[pos + 1:]
                A[sub] = -v if pos % 2 else v
        if not A:
            continue
        Af = Form(chart, alpha.degree - 1, A)
        gamma = Af.map_scalars(lambda c: _antiderivative(c, name))
        beta = beta + gamma
        rest = rest - dbar(gamma)
    if not rest.is_zero():
        raise NotClosed("input has a dzb-free component and is not dbar-exact")
    return beta


def _dzb_free(w: Form) -> Form:
    h = HoloChart.of(w.chart)
    zb_idx = {w.chart.index(n) for n in h.zb}
    return Form(w.chart, w.degree, {k: v for k, v in w.comps.items() if not zb_idx & set(k)})


def dbar_D_solve(w: AtiyahForm, check: bool = True) -> AtiyahForm:
    """``rho`` with ``dbar_D rho = w`` for a ``dbar_D``-closed polynomial Atiyah form."""
    chart = w.chart
    HoloChart.of(chart)
    if w.degree == 0:
        if w.is_zero():
            return AtiyahForm.zero(chart, 0)
        raise NotClosed("a nonzero function is not dbar_D-exact")
    if check and not dbar_D(w).is_zero():
        raise NotClosed("dbar_D w != 0")
    dec = kbar_decompose(w)
    w0 = dec.w0
    w1 = dec.w1
    rho0 = dbar_poly_solve(w0, check=False)
    k = rho0.degree
    sign = -1 if k % 2 else 1
    beta = w1 - _half_plus_LY(rho0).scale(chart.const(sign))
    # dbar(beta) = 0 by construction; its dzb-free part is holomorphic and is
    # absorbed by a holomorphic correction of rho0
    if not dbar(beta).is_zero():
        raise AssertionError("second-stage input is not dbar-closed")
    R = _dzb_free(beta)
    if not R.is_zero():
        hcorr = _inv_half_plus_LY(R.scale(chart.const(sign)))
        rho0 = rho0 + hcorr
        beta = beta - _half_plus_LY(hcorr).scale(chart.const(sign))
    if beta.degree == 0 or beta.is_zero():
        if not beta.is_zero():
            raise AssertionError("residual function after correction")
        rho1 = None if k == 0 else C.zero_form(chart, k - 1)
    else:
        rho1 = dbar_poly_solve(beta, check=False)
    return KDecomposition(rho0, rho1, bar=True).recompose()


# ---- conjugation and the partial_D solver ----------------------------------------------

def holo_conj(w: AtiyahForm) -> AtiyahForm:
    """Complex conjugation: conjugate coefficients and swap ``z <-> zb``."""
    h = _holo(w)
    chart = w.chart
    swap = {}
    for a, b in zip(h.z, h.zb):
        swap[a] = chart.coord(b)
        swap[b] = chart.coord(a)
    comps, deg = _to_comps(w)
    perm: dict[int, dict[int, Scalar]] = {}
    for a, b in zip(h.z, h.zb):
        ia, ib = chart.index(a), chart.index(b)
        perm[ia] = {ib: chart.one}
        perm[ib] = {ia: chart.one}
    conj = {k: v.conj().substitute(swap, chart) for k, v in comps.items()}
    return _from_comps(chart, change_generators(conj, perm), deg)


def partial_D_solve(w: AtiyahForm, check: bool = True) -> AtiyahForm:
    """``rho`` with ``partial_D rho = w``, by conjugating the ``dbar_D`` solver."""
    return holo_conj(dbar_D_solve(holo_conj(w), check=check))


# ---- real coordinates ---------------------------------------------------------------------

def from_real(w: AtiyahForm) -> AtiyahForm:
    """Rewrite a form on ``(u, x.., y..)`` in ``(u, z.., zb..)``."""
    rc = w.chart
    n = (rc.dim - 1) // 2
    if rc.names != real_names(n):
        raise NotHoloChart(f"{rc} is not a real cylinder chart")
    h = HoloChart(n)
    hc = h.chart
    i = hc.i
    half = hc.const(Fraction(1, 2))
    vals = {"u": hc.coord("u")}
    L: dict[int, dict[int, Scalar]] = {}
    xs, ys = real_names(n)[1:1 + n], real_names(n)[1 + n:]
    for k in range(n):
        z, zb = hc.coord(h.z[k]), hc.coord(h.zb[k])
        vals[xs[k]] = (z + zb) * half
        vals[ys[k]] = (z - zb) * half * (-i)
        iz, izb = 1 + k, 1 + n + k
        L[1 + k] = {iz: half, izb: half}                 # dx = (dz + dzb)/2
        L[1 + n + k] = {iz: -i * half, izb: i * half}    # dy = (dz - dzb)/(2i)
    comps, deg = _to_comps(w)
    sub = {k: v.substitute(vals, hc) for k, v in comps.items()}
    return _from_comps(hc, change_generators(sub, L), deg)


def to_real(w: AtiyahForm) -> AtiyahForm:
    h = _holo(w)
    n = h.n
    rc = h.real_chart
    i = rc.i
    xs, ys = real_names(n)[1:1 + n], real_names(n)[1 + n:]
    vals = {"u": rc.coord("u")}
    L: dict[int, dict[int, Scalar]] = {}
    for k in range(n):
        x, y = rc.coord(xs[k]), rc.coord(ys[k])
        vals[h.z[k]] = x + i * y
        vals[h.zb[k]] = x - i * y
        ix, iy = 1 + k, 1 + n + k
        L[1 + k] = {ix: rc.one, iy: i}
        L[1 + n + k] = {ix: rc.one, iy: -i}
    comps, deg = _to_comps(w)
    sub = {k: v.substitute(vals, rc) for k, v in comps.items()}
    return _from_comps(rc, change_generators(sub, L), deg)
