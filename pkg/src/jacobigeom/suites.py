"""Seeded randomized identity suites shared by the CLI and the test-suite."""
from __future__ import annotations

import random

from . import cartan as C
from . import linalg as LA
from .atiyah import AtiyahForm, atiyah_d
from .dolbeault import (HoloChart, dbar_D, dbar_D_solve, partial_D_projected,
                        dbar_D_projected)
from .omni import OmniSection, bfield, dorfman, omni_pair
from .randgen import (rand_atiyah, rand_chart, rand_closed_B, rand_gauge_complex,
                      rand_section)
from .report import Report
from .scalars import Chart
from .structures.nacs import dl_torsion_table, homogenized_torsion


def bfield_defect(B: AtiyahForm, a: OmniSection, b: OmniSection) -> OmniSection:
    """``[[e^B a, e^B b]] - e^B [[a, b]]``; zero whenever ``d_D B = 0``."""
    lhs = dorfman(bfield(B, a, check=False), bfield(B, b, check=False))
    return lhs - bfield(B, dorfman(a, b), check=False)


def stored_nonclosed_B() -> tuple[AtiyahForm, OmniSection, OmniSection]:
    """``B = x du^dp`` on ``(x, p, u)`` with a pair of sections exposing it."""
    ch = Chart(("x", "p", "u"))
    B = AtiyahForm.embed(C.dcoord(ch, "u").wedge(C.dcoord(ch, "p")).scale(ch.coord("x")))
    from .atiyah import Derivation

    z = AtiyahForm.zero(ch, 1)
    return B, OmniSection(Derivation.partial(ch, "x"), z), OmniSection(Derivation.partial(ch, "p"), z)


def bracket_suite(seed: int = 0, count: int = 100, max_dim: int = 4, degree: int = 2) -> Report:
    rep = Report("random bracket identities")
    rng = random.Random(seed)
    used = 0
    while used < count:
        ch = rand_chart(rng, max_dim)
        a, b, c = (rand_section(ch, rng, degree) for _ in range(3))
        used += 3
        lhs = dorfman(a, dorfman(b, c))
        rhs = dorfman(dorfman(a, b), c) + dorfman(b, dorfman(a, c))
        if lhs != rhs:
            rep.fail(f"Leibniz defect on {ch}")
        B = rand_atiyah(ch, 2, rng, degree)
        if omni_pair(bfield(B, a, check=False), bfield(B, b, check=False)) != omni_pair(a, b):
            rep.fail(f"pairing not preserved by e^B on {ch}")
        Bc = rand_closed_B(ch, rng, degree)
        if not bfield_defect(Bc, a, b).is_zero():
            rep.fail(f"bracket not preserved by closed e^B on {ch}")
    B, a, b = stored_nonclosed_B()
    defect = bfield_defect(B, a, b)
    rep.data["sections"] = used
    rep.data["nonclosed_defect"] = defect
    if defect.is_zero():
        rep.fail("stored non-closed B gives no bracket defect")
    return rep


def dolbeault_suite(seed: int = 0, count: int = 50, max_n: int = 2, degree: int = 3) -> Report:
    rep = Report("random Dolbeault-Atiyah identities")
    rng = random.Random(seed)
    for trial in range(count):
        n = rng.randint(1, max_n)
        ch = HoloChart(n).chart
        k = rng.randint(0, min(3, ch.dim))
        rho = rand_atiyah(ch, k, rng, degree, complex_=True)
        w = dbar_D(rho)
        if w != dbar_D_projected(rho):
            rep.fail(f"trial {trial}: closed-form dbar_D differs from the projection")
        if not dbar_D(w).is_zero():
            rep.fail(f"trial {trial}: dbar_D^2 != 0")
        if atiyah_d(rho) != partial_D_projected(rho) + w:
            rep.fail(f"trial {trial}: d_D != partial_D + dbar_D")
        if dbar_D(dbar_D_solve(w)) != w:
            rep.fail(f"trial {trial}: solver is not a right inverse")
    rep.data["count"] = count
    return rep


def homogenization_suite(seed: int = 0, count: int = 20, max_n: int = 2) -> Report:
    rep = Report("random homogenization equivalence")
    rng = random.Random(seed)
    seen = {True: 0, False: 0}
    for trial in range(count):
        n = 1 if trial % 4 else max_n
        phi, ch, _ = rand_gauge_complex(rng, n=n, integrable=(trial % 2 == 0))
        sq = LA.matmul(phi, phi)
        m = len(sq)
        if any(sq[a][b] != (-1 if a == b else 0) for a in range(m) for b in range(m)):
            rep.fail(f"trial {trial}: phi^2 != -id")
            continue
        flat = not dl_torsion_table(phi, ch)
        lifted = all(v.is_zero() for v in homogenized_torsion(phi, ch).values())
        seen[flat] += 1
        if flat != lifted:
            rep.fail(f"trial {trial}: torsion {flat} but homogenized torsion {lifted}")
    rep.data["integrable"] = seen[True]
    rep.data["non_integrable"] = seen[False]
    if not (seen[True] and seen[False]):
        rep.fail("suite did not exercise both directions")
    return rep
