from fractions import Fraction as F

import pytest

from orientcorr import oracle
from orientcorr.bounds import joint_lower_bound
from orientcorr.oracle import (
    JOINT_NOT_REACH,
    NOT_REACH,
    oracle_annealed_numeric,
    oracle_annealed_poly,
    oracle_quenched,
    oracle_tournament,
    quenched_mc,
)
from orientcorr.poly import Poly
from orientcorr.recursion import covariance_poly

RATIONALS = [F(0), F(1, 3), F(1, 2), F(5, 7), F(1)]


def test_tournament_examples():
    assert oracle_tournament(4, NOT_REACH) == F(1, 4)
    pa5 = oracle_tournament(5, NOT_REACH)
    assert (pa5 * 2**10).denominator == 1
    assert pa5 == F(150, 1024)
    assert oracle_tournament(4, JOINT_NOT_REACH) == F(3, 32)
    assert oracle_tournament(4, JOINT_NOT_REACH) >= joint_lower_bound(4)


def test_range_errors():
    with pytest.raises(ValueError):
        oracle_tournament(7, NOT_REACH)
    with pytest.raises(ValueError):
        oracle_annealed_poly(6, NOT_REACH)
    with pytest.raises(ValueError):
        oracle_annealed_numeric(3, JOINT_NOT_REACH, F(1, 2))
    with pytest.raises(ValueError):
        oracle_quenched(6, F(1, 2))


def test_annealed_examples():
    assert oracle_annealed_poly(2, NOT_REACH) == Poly([1, F(-1, 2)])
    assert oracle_annealed_poly(4, JOINT_NOT_REACH)(0) == 1
    assert oracle_annealed_poly(4, JOINT_NOT_REACH)(1) == oracle_tournament(4, JOINT_NOT_REACH)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_annealed_poly_and_numeric_agree(n):
    events = [NOT_REACH] + ([JOINT_NOT_REACH] if n >= 4 else [])
    for ev in events:
        poly = oracle_annealed_poly(n, ev)
        for p in RATIONALS:
            assert poly(p) == oracle_annealed_numeric(n, ev, p)
        assert oracle_annealed_numeric(n, ev, 1) == oracle_tournament(n, ev)
        assert oracle_annealed_numeric(n, ev, 0) == 1


@pytest.mark.parametrize("n", [4, 5])
def test_event_monotonicity_and_frechet(n):
    for p in RATIONALS:
        pa = oracle_annealed_numeric(n, NOT_REACH, p)
        pj = oracle_annealed_numeric(n, JOINT_NOT_REACH, p)
        assert max(F(0), 2 * pa - 1) <= pj <= pa


def test_orientation_covariance_of_single_graphs():
    # empty graph: both events certain
    assert oracle.orientation_covariance(4, 0) == 0
    # complete graph: tournament covariance
    assert oracle.orientation_covariance(4, (1 << 6) - 1) == F(3, 32) - F(1, 16)


def test_quenched_examples():
    for n in (4, 5):
        assert oracle_quenched(n, 0) == 0
        assert oracle_quenched(n, 1) == oracle_tournament(n, JOINT_NOT_REACH) - oracle_tournament(n, NOT_REACH) ** 2
    assert oracle_quenched(5, F(1, 2)) > 0


@pytest.mark.parametrize("n", [4, 5])
def test_quenched_and_annealed_both_positive(n):
    cov = covariance_poly(n)
    for k in range(1, 10):
        p = F(k, 10)
        assert oracle_quenched(n, p) > 0
        assert cov(p) > 0


def test_quenched_mc_against_exact():
    est = quenched_mc(5, F(1, 2), 4000, 3)
    assert est.contains(float(oracle_quenched(5, F(1, 2))), 3)


def test_quenched_mc_deterministic_and_degenerate():
    assert quenched_mc(5, F(1, 3), 1, 9) == quenched_mc(5, F(1, 3), 1, 9)
    est = quenched_mc(5, 1, 50, 2)
    assert est.stderr == 0
    assert est.mean == float(oracle_quenched(5, 1))


def test_gnm_enumeration_boundaries():
    probs = oracle.gnm_enumeration_counts(4, JOINT_NOT_REACH)
    assert probs[0] == 1
    assert probs[6] == oracle_tournament(4, JOINT_NOT_REACH)
