"""Canonical structures on the standard coordinate charts."""
from __future__ import annotations

from typing import Sequence

from .. import cartan as C
from .. import omni as O
from ..atiyah import AtiyahForm, atiyah_d
from ..cartan import Endo
from ..errors import UnknownName
from ..scalars import Chart, Scalar
from .gencontact import HomGC, build_L_JZ, complex_operator, contact_operator, eigenframe
from .jacobi import HomPoisson, JacobiPair
from .nacs import ACQuadruple


def _indexed(prefix: str, k: int) -> list[str]:
    return [prefix] if k == 1 else [f"{prefix}{i}" for i in range(1, k + 1)]


def contact_chart(d: int = 1, coords: Sequence[str] | None = None) -> Chart:
    names = list(coords) if coords else _indexed("x", d) + _indexed("p", d) + ["u"]
    if len(names) != 2 * d + 1:
        raise ValueError(f"expected {2 * d + 1} coordinates")
    return Chart(names)


def symplectic_chart(d: int = 1, coords: Sequence[str] | None = None) -> Chart:
    names = list(coords) if coords else _indexed("x", d) + _indexed("p", d)
    if len(names) != 2 * d:
        raise ValueError(f"expected {2 * d} coordinates")
    return Chart(names)


def cylinder_chart(n: int = 1, coords: Sequence[str] | None = None) -> Chart:
    names = list(coords) if coords else ["u"] + _indexed("x", n) + _indexed("y", n)
    if len(names) != 2 * n + 1:
        raise ValueError(f"expected {2 * n + 1} coordinates")
    return Chart(names)


def complex_chart(n: int = 1, coords: Sequence[str] | None = None) -> Chart:
    names = list(coords) if coords else _indexed("x", n) + _indexed("y", n)
    if len(names) != 2 * n:
        raise ValueError(f"expected {2 * n} coordinates")
    return Chart(names)


# ---- contact model ------------------------------------------------------------------

def J_can(d: int = 1, coords=None) -> JacobiPair:
    ch = contact_chart(d, coords)
    xs, ps, u = ch.names[:d], ch.names[d:2 * d], ch.names[2 * d]
    Eu = C.partial(ch, u)
    Lam = C.zero_multivector(ch, 2)
    for x, p in zip(xs, ps):
        Lam = Lam + C.partial(ch, p).wedge(C.partial(ch, x) + Eu.scale(ch.coord(p)))
    return JacobiPair(Lam, Eu)


def theta_can(d: int = 1, coords=None):
    ch = contact_chart(d, coords)
    xs, ps, u = ch.names[:d], ch.names[d:2 * d], ch.names[2 * d]
    th = C.dcoord(ch, u)
    for x, p in zip(xs, ps):
        th = th - C.dcoord(ch, x).scale(ch.coord(p))
    return th


def omega_can(d: int = 1, coords=None) -> AtiyahForm:
    return atiyah_d(AtiyahForm.embed(theta_can(d, coords)))


# ---- symplectic model ---------------------------------------------------------------

def pi_can(d: int = 1, coords=None) -> HomPoisson:
    ch = symplectic_chart(d, coords)
    xs, ps = ch.names[:d], ch.names[d:]
    pi = C.zero_multivector(ch, 2)
    Z = C.zero_multivector(ch, 1)
    for x, p in zip(xs, ps):
        pi = pi + C.partial(ch, p).wedge(C.partial(ch, x))
        Z = Z + C.partial(ch, p).scale(ch.coord(p))
    return HomPoisson(pi, Z)


def Omega_can(d: int = 1, coords=None):
    ch = symplectic_chart(d, coords)
    xs, ps = ch.names[:d], ch.names[d:]
    w = C.zero_form(ch, 2)
    for x, p in zip(xs, ps):
        w = w + C.dcoord(ch, x).wedge(C.dcoord(ch, p))
    return w


def Theta_can(d: int = 1, coords=None):
    ch = symplectic_chart(d, coords)
    xs, ps = ch.names[:d], ch.names[d:]
    w = C.zero_form(ch, 1)
    for x, p in zip(xs, ps):
        w = w + C.dcoord(ch, x).scale(ch.coord(p))
    return w


def xi_can(d: int = 1, coords=None) -> AtiyahForm:
    return -atiyah_d(AtiyahForm.embed(Theta_can(d, coords)))


def hgc_symplectic(d: int = 1, coords=None) -> HomGC:
    """``(0, pi_can; -Omega_can, 0)`` homogeneous for ``(Z_can, 0)``."""
    h = pi_can(d, coords)
    ch = h.chart
    return HomGC(Endo.zero(ch), h.pi, -Omega_can(d, coords), h.Z, C.zero_form(ch, 1))


# ---- complex models -----------------------------------------------------------------

def A_can(n: int = 1, coords=None) -> Endo:
    ch = complex_chart(n, coords)
    M = [[ch.zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        M[n + i][i] = ch.one    # d/dx -> d/dy
        M[i][n + i] = -ch.one   # d/dy -> -d/dx
    return Endo(ch, M)


def hgc_Cn(n: int = 1, coords=None) -> HomGC:
    A = A_can(n, coords)
    ch = A.chart
    return HomGC(A, C.zero_multivector(ch, 2), C.zero_form(ch, 2),
                 C.zero_multivector(ch, 1), C.zero_form(ch, 1))


def phi_can(n: int = 1, coords=None) -> list[list[Scalar]]:
    """``one -> d/du`` and ``d/dx -> d/dy`` in the frame ``{d_u, d_x.., d_y.., one}``."""
    ch = cylinder_chart(n, coords)
    m = ch.dim + 1
    M = [[ch.zero] * m for _ in range(m)]
    one = m - 1
    M[0][one] = ch.one      # one -> d_u
    M[one][0] = -ch.one     # d_u -> -one
    for i in range(n):
        x, y = 1 + i, 1 + n + i
        M[y][x] = ch.one
        M[x][y] = -ch.one
    return M


def nacs_normal_form(f: Scalar, n: int = 1) -> ACQuadruple:
    """``xi = d_u``, ``eta = du + f_y dx - f_x dy``, ``Phi = dx(x)d_y - dy(x)d_x + df(x)d_u``."""
    ch = f.chart
    u, xs, ys = ch.names[0], ch.names[1:1 + n], ch.names[1 + n:1 + 2 * n]
    if len(ch.names) != 2 * n + 1:
        raise ValueError("expected a chart (u, x.., y..)")
    xi = C.partial(ch, u)
    eta = C.dcoord(ch, u)
    Phi = Endo.tensor(C.d(C.scalar_form(f)), xi) if not f.is_zero() else Endo.zero(ch)
    for x, y in zip(xs, ys):
        eta = eta + C.dcoord(ch, x).scale(f.diff(y)) - C.dcoord(ch, y).scale(f.diff(x))
        Phi = Phi + Endo.tensor(C.dcoord(ch, x), C.partial(ch, y)) - Endo.tensor(C.dcoord(ch, y), C.partial(ch, x))
    return ACQuadruple(Phi, xi, eta)


# ---- registry -------------------------------------------------------------------------

def _by_d(fn):
    return lambda size, coords: fn(size, coords)


_GALLERY = {
    "J_can": _by_d(J_can),
    "theta_can": _by_d(theta_can),
    "omega_can": _by_d(omega_can),
    "pi_can": _by_d(pi_can),
    "Z_can": lambda s, c: pi_can(s, c).Z,
    "Omega_can": _by_d(Omega_can),
    "Theta_can": _by_d(Theta_can),
    "xi_can": _by_d(xi_can),
    "phi_can": _by_d(phi_can),
    "A_can": _by_d(A_can),
    "hgc_symplectic": _by_d(hgc_symplectic),
    "hgc_Cn": _by_d(hgc_Cn),
    "K_can": lambda s, c: contact_operator(J_can(s, c).Lam, J_can(s, c).E),
    "K_phi_can": lambda s, c: complex_operator(phi_can(s, c), cylinder_chart(s, c)),
    "L_Cn": lambda s, c: build_L_JZ(hgc_Cn(s, c)),
    "L_RxCn": lambda s, c: eigenframe(complex_operator(phi_can(s, c), cylinder_chart(s, c))),
    "L_can_odd": lambda s, c: eigenframe(contact_operator(J_can(s, c).Lam, J_can(s, c).E)),
    "L_can_ev": lambda s, c: build_L_JZ(hgc_symplectic(s, c)),
}

GALLERY_NAMES = tuple(_GALLERY)


def canonical(name: str, size: int = 1, coords: Sequence[str] | None = None):
    """Look up a gallery structure; ``size`` is ``d`` or ``n`` depending on the model."""
    try:
        build = _GALLERY[name]
    except KeyError:
        raise UnknownName(f"unknown structure {name!r}; known: {', '.join(GALLERY_NAMES)}") from None
    if size < 1:
        raise ValueError("size must be positive")
    return build(size, coords)


def dr_complex(chart: Chart) -> O.Frame:
    """``D R (x) C`` frame (derivations only)."""
    return O.dr_frame(chart)
