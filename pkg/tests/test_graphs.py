import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orientcorr.graphs import (
    ABSENT,
    BACKWARD,
    FORWARD,
    OrientedGraph,
    batch_reaches,
    in_cluster,
    num_pairs,
    out_cluster,
    reaches,
    sample_gnm_oriented,
    sample_gnp_oriented,
    sample_tournament,
)


def graphs(max_n=6):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.lists(st.sampled_from([ABSENT, FORWARD, BACKWARD]), min_size=num_pairs(n), max_size=num_pairs(n)).map(
            lambda s: OrientedGraph(n, tuple(s))
        )
    )


def brute_reach(g: OrientedGraph):
    """All-pairs reachability by Floyd-Warshall style closure on a matrix."""
    n = g.n
    R = [[u == v for v in range(n)] for u in range(n)]
    for u, v in g.arcs():
        R[u][v] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                R[i][j] = R[i][j] or (R[i][k] and R[k][j])
    return R


def test_reaches_examples():
    g = OrientedGraph.from_arcs(2, [(0, 1)])
    assert reaches(g, 0, 1)
    assert not reaches(g, 1, 0)
    assert reaches(OrientedGraph.empty(3), 2, 2)
    assert not reaches(OrientedGraph.empty(2), 0, 1)


def test_vertex_out_of_range():
    with pytest.raises(ValueError):
        reaches(OrientedGraph.empty(3), 0, 3)
    with pytest.raises(ValueError):
        out_cluster(OrientedGraph.empty(3), -1)


def test_cluster_examples():
    assert out_cluster(OrientedGraph.empty(4), 2) == {2}
    path = OrientedGraph.from_arcs(3, [(0, 1), (1, 2)])
    assert out_cluster(path, 0) == {0, 1, 2}
    assert in_cluster(path, 2) == {0, 1, 2}
    star = OrientedGraph.from_arcs(4, [(1, 0), (2, 0), (3, 0)])
    assert out_cluster(star, 0) == {0}
    assert in_cluster(OrientedGraph.empty(3), 1) == {1}


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_clusters_match_brute_force(g):
    R = brute_reach(g)
    for v in range(g.n):
        assert out_cluster(g, v) == {u for u in range(g.n) if R[v][u]}
        assert in_cluster(g, v) == {u for u in range(g.n) if R[u][v]}
        assert in_cluster(g, v) == out_cluster(g.reverse(), v)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_reach_reflexive_transitive_and_reversal(g):
    n = g.n
    R = [[reaches(g, u, v) for v in range(n)] for u in range(n)]
    for u in range(n):
        assert R[u][u]
        for v in range(n):
            assert R[u][v] == reaches(g.reverse(), v, u)
            for w in range(n):
                if R[u][v] and R[v][w]:
                    assert R[u][w]


@settings(max_examples=100, deadline=None)
@given(graphs())
def test_batch_reaches_agrees(g):
    states = np.array([g.states], dtype=np.int8).reshape(1, -1)
    pairs = [(u, v) for u in range(g.n) for v in range(g.n)]
    got = batch_reaches(states, g.n, pairs)
    for (u, v), arr in zip(pairs, got):
        assert bool(arr[0]) == reaches(g, u, v)


def test_batch_reaches_bool_path_for_large_n():
    rng = np.random.default_rng(5)
    n = 70
    states = rng.integers(0, 3, size=(3, num_pairs(n)), dtype=np.int8)
    got = batch_reaches(states, n, [(0, 1), (5, 9)])
    for i in range(3):
        g = OrientedGraph(n, tuple(int(s) for s in states[i]))
        assert bool(got[0][i]) == reaches(g, 0, 1)
        assert bool(got[1][i]) == reaches(g, 5, 9)


def test_json_format():
    g = OrientedGraph.from_arcs(3, [(0, 1), (2, 0)])
    assert g.to_dict() == {"n": 3, "states": "><."}
    assert OrientedGraph.from_json(g.to_json()) == g
    assert json.loads(g.to_json())["n"] == 3


def test_tournament_sampler():
    assert sample_tournament(1, 3).states == ()
    g = sample_tournament(7, 11)
    assert ABSENT not in g.states
    assert sample_tournament(7, 11) == g


def test_tournament_forward_frequency():
    hits = sum(sample_tournament(4, seed).states[2] == FORWARD for seed in range(20000))
    # 20k draws: sd of the frequency is ~0.0035
    assert abs(hits / 20000 - 0.5) < 0.015


def test_gnp_sampler():
    assert set(sample_gnp_oriented(6, 0, 1).states) == {ABSENT}
    assert sample_gnp_oriented(6, 1, 9) == sample_tournament(6, 9)
    assert sample_gnp_oriented(5, 0.3, 4) == sample_gnp_oriented(5, 0.3, 4)
    with pytest.raises(ValueError):
        sample_gnp_oriented(4, 1.5, 0)


def test_gnp_forward_frequency_batch():
    from orientcorr.graphs import gnp_states

    states = gnp_states(np.random.default_rng(0), 4, 0.5, 100000)
    freq = np.mean(states == FORWARD, axis=0)
    assert np.all(np.abs(freq - 0.25) < 0.01)


def test_gnm_sampler():
    assert set(sample_gnm_oriented(5, 0, 1).states) == {ABSENT}
    full = sample_gnm_oriented(5, 10, 2)
    assert ABSENT not in full.states
    for seed in range(50):
        assert sample_gnm_oriented(6, 7, seed).edge_count() == 7
    assert sample_gnm_oriented(6, 7, 3) == sample_gnm_oriented(6, 7, 3)
    with pytest.raises(ValueError):
        sample_gnm_oriented(4, 7, 0)


def test_gnm_batch_is_uniform_over_subsets():
    from orientcorr.graphs import gnm_states

    states = gnm_states(np.random.default_rng(1), 4, 2, 60000)
    assert np.all(np.count_nonzero(states, axis=1) == 2)
    subsets = [tuple(np.flatnonzero(row)) for row in states[:, :]]
    counts = {c: 0 for c in itertools.combinations(range(6), 2)}
    for s in subsets:
        counts[s] += 1
    # 15 subsets, 4000 expected each, sd ~ 61
    assert all(abs(c - 4000) < 300 for c in counts.values())
