import random

import pytest

from jacobigeom import linalg as LA
from jacobigeom.omni import OmniSection
from jacobigeom.randgen import rand_closed_B, rand_gauge_complex, rand_section
from jacobigeom.atiyah import atiyah_d
from jacobigeom.scalars import Chart
from jacobigeom.structures.nacs import dl_torsion_table
from jacobigeom.suites import (bfield_defect, bracket_suite, dolbeault_suite, homogenization_suite,
                               stored_nonclosed_B)


def test_bracket_suite_small():
    rep = bracket_suite(seed=3, count=12, max_dim=3)
    assert rep.passed, rep.witnesses
    assert rep.data["sections"] >= 12


def test_dolbeault_suite_small():
    rep = dolbeault_suite(seed=1, count=6)
    assert rep.passed, rep.witnesses


def test_homogenization_suite_small():
    rep = homogenization_suite(seed=2, count=8)
    assert rep.passed, rep.witnesses
    assert rep.data["integrable"] and rep.data["non_integrable"]


def test_stored_nonclosed_B():
    B, a, b = stored_nonclosed_B()
    assert not atiyah_d(B).is_zero()
    defect = bfield_defect(B, a, b)
    assert isinstance(defect, OmniSection) and not defect.is_zero()


@pytest.mark.parametrize("seed", range(4))
def test_closed_B_has_no_defect(seed):
    rng = random.Random(seed)
    ch = Chart(("x", "p", "u"))
    B = rand_closed_B(ch, rng)
    assert atiyah_d(B).is_zero()
    assert bfield_defect(B, rand_section(ch, rng), rand_section(ch, rng)).is_zero()


@pytest.mark.parametrize("seed", range(6))
def test_gauge_complex_squares_to_minus_one(seed):
    rng = random.Random(seed)
    phi, ch, integrable = rand_gauge_complex(rng, n=1, integrable=seed % 2 == 0)
    sq = LA.matmul(phi, phi)
    m = len(sq)
    assert all(sq[a][b] == (-1 if a == b else 0) for a in range(m) for b in range(m))
    # the random non-normal branch may still land on a normal structure
    if integrable:
        assert not dl_torsion_table(phi, ch)


def test_suites_are_seeded():
    a = homogenization_suite(seed=5, count=6)
    b = homogenization_suite(seed=5, count=6)
    assert a.data == b.data
