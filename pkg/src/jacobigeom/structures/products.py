"""Dirac-Jacobi frames attached to homogeneous Poisson data."""
from __future__ import annotations

from .. import cartan as C
from .. import omni as O
from ..atiyah import Derivation, jet
from ..cartan import Multivector


def hom_poisson_frame(pi: Multivector, Z: Multivector, samples=None) -> O.Frame:
    """``<(one - Z, 0), (pi# eta, eta + eta(Z) j)>``."""
    chart = pi.chart
    gens = [O.section(D=Derivation(-Z, chart.one))]
    for name in chart.names:
        eta = C.dcoord(chart, name)
        X = C.sharp(pi, eta) if not pi.is_zero() else C.zero_multivector(chart, 1)
        gens.append(O.OmniSection(Derivation(X, chart.zero), jet(eta, C.pair(eta, Z))))
    return O.make_frame(chart, gens, samples)
