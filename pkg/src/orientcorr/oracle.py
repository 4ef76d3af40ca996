"""Brute-force ground truth by exhaustive enumeration.

Edge-state assignments are enumerated as base-3 integers whose digit ``k``
(least significant first) is the state of pair ``k`` in canonical pair order.
Satisfying assignments are tallied by their number of present edges ``e``;
since every assignment with ``e`` present edges has weight
``(p/2)**e * (1-p)**(N-e)``, the tally determines the probability exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb, sqrt

import numpy as np

from .graphs import A, B, S, T, batch_reaches, derive_rng, num_pairs
from .poly import Poly, atoms

CHUNK = 1 << 18

# largest n for each enumeration
MAX_TOURNAMENT = 6
MAX_SYMBOLIC = 5
MAX_NUMERIC = 6
MAX_QUENCHED = 5


class Event(str, Enum):
    NOT_REACH = "not_reach"
    JOINT_NOT_REACH = "joint"


@dataclass(frozen=True)
class EventSpec:
    kind: Event

    def min_n(self) -> int:
        return 2 if self.kind is Event.NOT_REACH else 4

    def check(self, n: int) -> None:
        if n < self.min_n():
            raise ValueError(f"{self.kind.value} needs n >= {self.min_n()}, got {n}")


NOT_REACH = EventSpec(Event.NOT_REACH)
JOINT_NOT_REACH = EventSpec(Event.JOINT_NOT_REACH)


def _indicator(states: np.ndarray, n: int, ev: EventSpec) -> np.ndarray:
    if ev.kind is Event.NOT_REACH:
        (sa,) = batch_reaches(states, n, [(S, A)])
        return ~sa
    sa, tb = batch_reaches(states, n, [(S, A), (T, B)])
    return ~sa & ~tb


def _digits(idx: np.ndarray, ndigits: int, base: int) -> np.ndarray:
    out = np.empty((idx.shape[0], ndigits), dtype=np.int8)
    rest = idx.copy()
    for k in range(ndigits):
        out[:, k] = rest % base
        rest //= base
    return out


def _check_range(n: int, hi: int, what: str) -> None:
    if not 2 <= n <= hi:
        raise ValueError(f"{what} enumeration supports 2 <= n <= {hi}, got {n}")


@lru_cache(maxsize=None)
def annealed_counts(n: int, ev: EventSpec) -> tuple[int, ...]:
    """``counts[e]`` = satisfying edge-state assignments with ``e`` present edges."""
    ev.check(n)
    _check_range(n, MAX_NUMERIC, "annealed")
    N = num_pairs(n)
    counts = np.zeros(N + 1, dtype=np.int64)
    total = 3**N
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        states = _digits(idx, N, 3)
        hit = _indicator(states, n, ev)
        edges = np.count_nonzero(states[hit], axis=1)
        counts += np.bincount(edges, minlength=N + 1)
    return tuple(int(c) for c in counts)


def oracle_tournament(n: int, ev: EventSpec) -> Fraction:
    """Exact probability over all ``2**C(n,2)`` tournaments."""
    ev.check(n)
    _check_range(n, MAX_TOURNAMENT, "tournament")
    N = num_pairs(n)
    hits = 0
    total = 1 << N
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        states = _digits(idx, N, 2) + 1
        hits += int(np.count_nonzero(_indicator(states, n, ev)))
    return Fraction(hits, total)


def oracle_annealed_poly(n: int, ev: EventSpec) -> Poly:
    _check_range(n, MAX_SYMBOLIC, "symbolic annealed")
    counts = annealed_counts(n, ev)
    x, _, q = atoms()
    N = num_pairs(n)
    total = Poly()
    for e, c in enumerate(counts):
        if c:
            total = total + c * x**e * q ** (N - e)
    return total


def oracle_annealed_numeric(n: int, ev: EventSpec, p) -> Fraction:
    _check_range(n, MAX_NUMERIC, "numeric annealed")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    counts = annealed_counts(n, ev)
    N = num_pairs(n)
    x, q = p / 2, 1 - p
    return sum((c * x**e * q ** (N - e) for e, c in enumerate(counts) if c), Fraction(0))


# -- quenched model -----------------------------------------------------------


def orientation_covariance(n: int, edge_mask: int) -> Fraction:
    """Covariance of ``A`` and ``B`` over the ``2**|E|`` orientations of one graph.

    ``edge_mask`` has bit ``k`` set when pair ``k`` is present.
    """
    return _orientation_covariance(n, int(edge_mask))


@lru_cache(maxsize=1 << 16)
def _orientation_covariance(n: int, edge_mask: int) -> Fraction:
    N = num_pairs(n)
    present = [k for k in range(N) if edge_mask >> k & 1]
    m = len(present)
    total = 1 << m
    ca = cb = cab = 0
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        states = np.zeros((idx.shape[0], N), dtype=np.int8)
        if m:
            states[:, present] = _digits(idx, m, 2) + 1
        sa, tb = batch_reaches(states, n, [(S, A), (T, B)])
        ia, ib = ~sa, ~tb
        ca += int(np.count_nonzero(ia))
        cb += int(np.count_nonzero(ib))
        cab += int(np.count_nonzero(ia & ib))
    return Fraction(cab, total) - Fraction(ca * cb, total * total)


@lru_cache(maxsize=None)
def quenched_poly(n: int) -> Poly:
    """``E_G[cov_orient(A, B | G)]`` as a polynomial in ``p`` (``n <= 5``)."""
    if not 4 <= n <= MAX_QUENCHED:
        raise ValueError(f"exact quenched enumeration supports 4 <= n <= {MAX_QUENCHED}")
    N = num_pairs(n)
    by_edges = [Fraction(0)] * (N + 1)
    for mask in range(1 << N):
        by_edges[bin(mask).count("1")] += orientation_covariance(n, mask)
    p = Poly([0, 1])
    q = Poly([1, -1])
    total = Poly()
    for e, c in enumerate(by_edges):
        if c:
            total = total + c * p**e * q ** (N - e)
    return total


def oracle_quenched(n: int, p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return quenched_poly(n).eval(p)


@dataclass(frozen=True)
class EstimateCI:
    mean: float
    stderr: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 1 or self.stderr < 0:
            raise ValueError("need samples >= 1 and stderr >= 0")

    def contains(self, value: float, k: float = 3.0) -> bool:
        return abs(self.mean - value) <= k * self.stderr


def quenched_mc(n: int, p, graph_samples: int, seed: int) -> EstimateCI:
    """Average exact per-graph orientation covariance over sampled ``G(n, p)``."""
    if n < 4:
        raise ValueError("need n >= 4")
    if n > MAX_NUMERIC:
        raise ValueError(f"per-graph orientation enumeration supports n <= {MAX_NUMERIC}")
    if graph_samples < 1:
        raise ValueError("graph_samples must be >= 1")
    pf = float(Fraction(p)) if not isinstance(p, float) else p
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    N = num_pairs(n)
    rng = derive_rng(seed, 0)
    present = rng.random((graph_samples, N)) < pf
    weights = 1 << np.arange(N, dtype=np.int64)
    masks = present.astype(np.int64) @ weights
    uniq, counts = np.unique(masks, return_counts=True)
    vals = np.array([float(orientation_covariance(n, int(m))) for m in uniq])
    mean = float(counts @ vals) / graph_samples
    if graph_samples > 1:
        ss = float(counts @ (vals - mean) ** 2)
        se = sqrt(ss / (graph_samples - 1) / graph_samples)
    else:
        se = 0.0
    return EstimateCI(mean, se, graph_samples, seed)


@dataclass(frozen=True)
class QuenchedPoint:
    p: Fraction
    estimate: EstimateCI
    flagged: bool

    @property
    def margin(self) -> float:
        """Mean in units of its standard error (``inf`` when the error is 0)."""
        if self.estimate.stderr == 0:
            return float("inf") if self.estimate.mean > 0 else 0.0
        return self.estimate.mean / self.estimate.stderr


def quenched_positivity(n: int, grid, samples: int, seed: int, max_samples: int, sigmas: float = 3.0) -> list[QuenchedPoint]:
    """Estimate the quenched covariance on a grid, doubling the sample count
    at any point until it is positive by ``sigmas`` standard errors.

    Points still short at ``max_samples`` come back with ``flagged=True``.
    """
    out = []
    for i, p in enumerate(grid):
        k = samples
        while True:
            est = quenched_mc(n, p, k, seed + i)
            if est.mean > sigmas * est.stderr or k >= max_samples:
                break
            k = min(2 * k, max_samples)
        out.append(QuenchedPoint(Fraction(p), est, not est.mean > sigmas * est.stderr))
    return out


def gnm_enumeration_counts(n: int, ev: EventSpec) -> dict[int, Fraction]:
    """Exact ``P(ev)`` in oriented ``G(n, m)`` for every ``m``, by enumeration."""
    counts = annealed_counts(n, ev)
    N = num_pairs(n)
    return {m: Fraction(counts[m], comb(N, m) * 2**m) for m in range(N + 1)}
