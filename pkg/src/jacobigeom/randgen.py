"""Seeded random polynomial data for property suites."""
from __future__ import annotations

import random
from itertools import combinations

from . import cartan as C
from .atiyah import AtiyahForm, Derivation, atiyah_d
from .cartan import Endo, Form
from .omni import OmniSection
from .scalars import Chart, Scalar
from .structures.nacs import ACQuadruple, gauge_conjugate, to_phi
from .structures.gallery import cylinder_chart, nacs_normal_form


def rand_poly(chart: Chart, rng: random.Random, max_degree: int = 2, terms: int = 3,
              complex_: bool = False, names=None) -> Scalar:
    names = list(names) if names is not None else list(chart.names)
    out = chart.zero
    for _ in range(rng.randint(1, terms)):
        re = rng.randint(-3, 3)
        im = rng.randint(-3, 3) if complex_ else 0
        m = chart.const(re, im)
        if names:
            for _ in range(rng.randint(0, max_degree)):
                m = m * chart.coord(rng.choice(names))
        out = out + m
    return out


def rand_form(chart: Chart, degree: int, rng: random.Random, max_degree: int = 2,
              density: float = 0.5, complex_: bool = False) -> Form:
    comps = {}
    for key in combinations(range(chart.dim), degree):
        if rng.random() < density:
            comps[key] = rand_poly(chart, rng, max_degree, complex_=complex_)
    return Form(chart, degree, comps)


def rand_atiyah(chart: Chart, degree: int, rng: random.Random, max_degree: int = 2,
                complex_: bool = False) -> AtiyahForm:
    w0 = rand_form(chart, degree, rng, max_degree, complex_=complex_)
    w1 = rand_form(chart, degree - 1, rng, max_degree, complex_=complex_) if degree >= 1 else None
    return AtiyahForm.make(w0, w1)


def rand_derivation(chart: Chart, rng: random.Random, max_degree: int = 2) -> Derivation:
    X = C.vector(chart, [rand_poly(chart, rng, max_degree) if rng.random() < 0.7 else chart.zero
                         for _ in chart.names])
    return Derivation(X, rand_poly(chart, rng, max_degree))


def rand_section(chart: Chart, rng: random.Random, max_degree: int = 2) -> OmniSection:
    return OmniSection(rand_derivation(chart, rng, max_degree), rand_atiyah(chart, 1, rng, max_degree))


def rand_closed_B(chart: Chart, rng: random.Random, max_degree: int = 2) -> AtiyahForm:
    """``d_D`` of a random Atiyah 1-form; closed by construction."""
    return atiyah_d(rand_atiyah(chart, 1, rng, max_degree))


def rand_chart(rng: random.Random, max_dim: int = 4) -> Chart:
    dim = rng.randint(1, max_dim)
    return Chart(("x", "p", "u", "v")[:dim])


# ---- gauge endomorphisms with phi^2 = -id -----------------------------------------------

def almost_contact_from_alpha(alpha: Form) -> ACQuadruple:
    """``Phi = J_std + alpha (x) d_u``, ``xi = d_u``, ``eta = du + alpha o J_std``.

    Any horizontal 1-form ``alpha`` gives almost contact data; it is normal
    when ``alpha = df`` with ``f`` independent of ``u``.
    """
    ch = alpha.chart
    n = (ch.dim - 1) // 2
    xs, ys = ch.names[1:1 + n], ch.names[1 + n:]
    Phi = Endo.tensor(alpha, C.partial(ch, "u")) if not alpha.is_zero() else Endo.zero(ch)
    eta = C.dcoord(ch, "u")
    for x, y in zip(xs, ys):
        Phi = Phi + Endo.tensor(C.dcoord(ch, x), C.partial(ch, y)) - Endo.tensor(C.dcoord(ch, y), C.partial(ch, x))
    # alpha o J: J d_x = d_y, J d_y = -d_x
    comps = C.components(alpha)
    for k in range(n):
        ix, iy = 1 + k, 1 + n + k
        eta = eta + C.dcoord(ch, xs[k]).scale(comps[iy]) - C.dcoord(ch, ys[k]).scale(comps[ix])
    return ACQuadruple(Phi, C.partial(ch, "u"), eta)


def rand_gauge_complex(rng: random.Random, n: int = 1, integrable: bool | None = None,
                       max_degree: int = 2, gauge: bool = True):
    """A random ``phi`` with ``phi^2 = -id`` on ``(u, x.., y..)``; returns ``(phi, chart, built_integrable)``."""
    ch = cylinder_chart(n)
    if integrable is None:
        integrable = rng.random() < 0.5
    horiz = ch.names[1:]
    if integrable:
        f = rand_poly(ch, rng, max_degree + 1, names=horiz)
        t = nacs_normal_form(f, n)
    else:
        comps = [ch.zero] + [rand_poly(ch, rng, max_degree) for _ in horiz]
        t = almost_contact_from_alpha(C.one_form(ch, comps))
    phi = to_phi(t)
    if gauge:
        phi = gauge_conjugate(phi, rand_poly(ch, rng, max_degree))
    return phi, ch, integrable
