"""Sign conventions shared by the structure layer.

Bivectors evaluate as ``(a^b)(alpha, beta) = alpha(a) beta(b) - alpha(b) beta(a)``
and ``Lambda#eta = Lambda(eta, -)``.  The Schouten bracket is the
odd-variable formula in :func:`jacobigeom.cartan.schouten`; with it the
canonical contact pair satisfies ``[L, L] = 2 E ^ L`` and ``[E, L] = 0``.

For a Jacobi pair ``J = (Lambda, E)`` the sharp map on 1-jets is

    J#(eta + f j) = (Lambda#eta - f E) + eta(E) one,

equivalently ``J(psi, psi') = <psi', J# psi>``.  With this sign
``<j1 g, J# j1 f> = Lambda(df, dg) + E(f) g - f E(g)``, and for a
non-degenerate ``J`` the inverse Atiyah 2-form ``w`` has ``w_flat = (J#)^-1``
with ``w_flat(Delta) = i_Delta w``.
"""
from __future__ import annotations

from . import cartan as C
from .atiyah import AtiyahForm, Derivation
from .cartan import Multivector

# Lower-left block of the contact operator is CONTACT_OMEGA_SIGN * w_flat
# where w = J^{-1}; this makes K^2 = -id since J# w_flat = id.
CONTACT_OMEGA_SIGN = -1


def jacobi_sharp(Lam: Multivector, E: Multivector, psi: AtiyahForm) -> Derivation:
    eta, f = psi.w0, psi.g
    X = C.sharp(Lam, eta) if not eta.is_zero() else C.zero_multivector(Lam.chart, 1)
    if not f.is_zero() and not E.is_zero():
        X = X - E.scale(f)
    g = C.pair(eta, E) if not eta.is_zero() else Lam.chart.zero
    return Derivation(X, g)


def poisson_sharp(pi: Multivector, eta) -> Multivector:
    return C.sharp(pi, eta)


def jacobi_bracket(Lam: Multivector, E: Multivector, f, g):
    """``{f, g} = Lambda(df, dg) + E(f) g - f E(g)``."""
    df = C.d(C.scalar_form(f))
    dg = C.d(C.scalar_form(g))
    return (C.evaluate_multivector(Lam, df, dg)
            + C.vector_apply(E, f) * g - f * C.vector_apply(E, g))
