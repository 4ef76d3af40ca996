from fractions import Fraction as F
from math import comb

import pytest

from bruteforce import A, T, cluster_pair_polys, out_cluster_polys
from orientcorr import recursion
from orientcorr.bounds import joint_lower_bound, marginal_bounds
from orientcorr.poly import Poly, atoms
from orientcorr.recursion import (
    NpKey,
    Recursion,
    correlation_report,
    covariance_poly,
    d_poly,
    np_poly,
    p_joint_not_reach,
    p_not_reach,
    relative_covariance,
)

x, y, q = atoms()
GRID_101 = [F(k, 100) for k in range(101)]


def admissible_keys(n):
    for r in range(0, n - 1):
        m = n - r
        for tau in range(1, m + 1):
            for alpha in range(1, m + 1):
                j = tau + alpha - m
                if j == 0 or j >= 2:
                    yield NpKey(n, tau, alpha, r)


# -- d --------------------------------------------------------------------------


def test_d_examples():
    assert d_poly(1, 1) == Poly([1])
    assert d_poly(2, 2) == Poly([0, F(1, 2)])
    for n in range(1, 8):
        assert d_poly(n, 1) == y ** (n - 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_matches_enumeration(n):
    polys = out_cluster_polys(n)
    for cluster, poly in polys.items():
        assert d_poly(n, len(cluster)) == poly


@pytest.mark.parametrize("n", range(2, 11))
def test_d_total_probability(n):
    total = sum((comb(n - 1, k - 1) * d_poly(n, k) for k in range(1, n + 1)), Poly())
    assert total == Poly([1])


def test_d_range_errors():
    with pytest.raises(ValueError):
        d_poly(3, 4)
    with pytest.raises(ValueError):
        d_poly(3, 0)


# -- N --------------------------------------------------------------------------


def test_np_bases():
    assert np_poly(2, 2, 2, 0) == Poly([0, F(1, 2)])
    assert np_poly(2, 1, 1, 0) == Poly([1, F(-1, 2)])


def test_np_small_key_from_hand_count():
    # t has no out-arc, a has no in-arc: the pairs ta, tw, aw each avoid one direction
    assert np_poly(3, 1, 1, 1) == y**3


@pytest.mark.parametrize("n", [3, 4])
def test_np_matches_enumeration(n):
    polys = cluster_pair_polys(n)
    seen = set()
    for (Tset, Aset), poly in polys.items():
        tau, alpha = len(Tset), len(Aset)
        r = n - len(Tset | Aset)
        key = NpKey(n, tau, alpha, r)
        key.validate()
        assert np_poly(n, tau, alpha, r) == poly, key
        seen.add(key)
    assert seen == set(admissible_keys(n))


@pytest.mark.slow
def test_np_matches_enumeration_n5():
    polys = cluster_pair_polys(5)
    for (Tset, Aset), poly in polys.items():
        r = 5 - len(Tset | Aset)
        assert np_poly(5, len(Tset), len(Aset), r) == poly


@pytest.mark.parametrize("n", range(2, 7))
def test_np_symmetry_without_swap(n):
    free = Recursion(*atoms(), Poly([1]), canonical=False)
    for key in admissible_keys(n):
        assert free.N(key.n, key.tau, key.alpha, key.r) == free.N(key.n, key.alpha, key.tau, key.r)
        assert free.N(key.n, key.tau, key.alpha, key.r) == np_poly(key.n, key.tau, key.alpha, key.r)


@pytest.mark.parametrize("n", range(2, 7))
def test_np_normalization(n):
    assert recursion.symbolic().shape_total(n) == Poly([1])


@pytest.mark.parametrize(
    "key",
    [NpKey(3, 2, 2, 0), NpKey(4, 2, 3, 0), NpKey(1, 1, 1, 0), NpKey(4, 5, 2, 0), NpKey(4, 1, 1, 3)],
)
def test_np_domain_errors(key):
    with pytest.raises(ValueError):
        np_poly(key.n, key.tau, key.alpha, key.r)


# -- marginal and joint ------------------------------------------------------------


def test_not_reach_examples():
    assert p_not_reach(2) == y
    assert p_not_reach(4)(1) == F(1, 4)
    assert abs(p_not_reach(9)(1) - F("0.008309")) <= F(5, 10**7)


def test_not_reach_rejects_small_n():
    with pytest.raises(ValueError):
        p_not_reach(1)


def test_joint_examples():
    for n in (4, 5, 6):
        assert p_joint_not_reach(n)(0) == 1
    # all 64 tournaments on K_4, counted by the oracle
    assert p_joint_not_reach(4)(1) == F(3, 32)


def test_joint_rejects_small_n():
    for f in (p_joint_not_reach, covariance_poly):
        with pytest.raises(ValueError):
            f(3)


def test_covariance_examples():
    for n in (4, 5, 6, 7):
        assert covariance_poly(n)(0) == 0
    assert covariance_poly(4)(1) == F(3, 32) - F(1, 16)
    cov6 = covariance_poly(6)
    assert all(cov6(F(k, 20)) > 0 for k in range(1, 21))


def test_relative_covariance_examples():
    assert relative_covariance(5, 0) == 0
    assert relative_covariance(6, F(1, 2)) > 0
    assert abs(float(relative_covariance(20, 1)) - 2 / 3) < 0.01


def test_fixed_p_engine_agrees_with_polynomials():
    for n in (4, 7, 9):
        for p in (F(1, 7), F(1, 2), F(9, 10), F(1)):
            assert recursion.p_not_reach_at(n, p) == p_not_reach(n)(p)
            assert recursion.p_joint_not_reach_at(n, p) == p_joint_not_reach(n)(p)


@pytest.mark.parametrize("n", range(4, 17))
def test_bound_sandwich_at_one(n):
    lo, hi = marginal_bounds(n)
    pa = recursion.p_not_reach_at(n, 1)
    assert lo <= pa <= hi
    assert recursion.p_joint_not_reach_at(n, 1) >= joint_lower_bound(n)


@pytest.mark.parametrize("n", range(4, 13))
def test_probabilities_in_unit_interval(n):
    for poly in (p_not_reach(n), p_joint_not_reach(n)):
        for p in GRID_101:
            assert 0 <= poly(p) <= 1


@pytest.mark.parametrize("n", range(4, 10))
def test_joint_at_least_empty_graph_weight(n):
    pj = p_joint_not_reach(n)
    N = n * (n - 1) // 2
    for p in GRID_101[:-1]:
        assert pj(p) >= (1 - p) ** N > 0


def test_degree_bound():
    for n in range(2, 10):
        assert p_not_reach(n).degree <= n * (n - 1) // 2
        if n >= 4:
            assert p_joint_not_reach(n).degree <= n * (n - 1) // 2


def test_correlation_report_invariants():
    rep = correlation_report(6, F(1, 3))
    assert rep.pA == rep.pB
    assert rep.covariance == rep.pJoint - rep.pA * rep.pB
    assert rep.relativeCovariance == rep.covariance / rep.pJoint
    assert rep.method is recursion.Method.EXACT
    sym = correlation_report(5)
    assert sym.p is None and sym.covariance == covariance_poly(5)
    with pytest.raises(ValueError):
        correlation_report(3, F(1, 2))
