"""Oriented graphs on ``K_n``, reachability, and seeded samplers.

Pairs ``{u, v}`` with ``u < v`` are indexed lexicographically.  Each pair
carries one of three states: ``ABSENT`` (0), ``FORWARD`` (1, meaning
``u -> v``) or ``BACKWARD`` (2, meaning ``v -> u``).

Vertex labels follow a fixed convention for the correlation events:
``s = 0``, ``a = 1``, ``t = 2``, ``b = 3``.

Random streams
--------------
Every sampler draws from ``numpy.random.default_rng(seed)`` (PCG64 seeded
through ``SeedSequence``).  Streams for parallel work are derived with
:func:`derive_rng`, which seeds ``SeedSequence([seed, index])``.  Per pair,
one uniform ``u`` in ``[0, 1)`` is drawn in canonical pair order; the pair is
``FORWARD`` if ``u < p/2``, ``BACKWARD`` if ``p/2 <= u < p`` and ``ABSENT``
otherwise.  Tournaments are the ``p = 1`` case of the same rule.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

ABSENT, FORWARD, BACKWARD = 0, 1, 2
_CHARS = ".><"

S, A, T, B = 0, 1, 2, 3


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((u, v) for u in range(n) for v in range(u + 1, n))


@lru_cache(maxsize=None)
def _pair_index_table(n: int) -> dict[tuple[int, int], int]:
    return {uv: k for k, uv in enumerate(pair_list(n))}


def pair_index(n: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return _pair_index_table(n)[(u, v)]


@dataclass(frozen=True)
class OrientedGraph:
    n: int
    states: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.states) != num_pairs(self.n):
            raise ValueError(f"expected {num_pairs(self.n)} pair states, got {len(self.states)}")
        if any(s not in (ABSENT, FORWARD, BACKWARD) for s in self.states):
            raise ValueError("pair states must be 0, 1 or 2")

    @classmethod
    def empty(cls, n: int) -> "OrientedGraph":
        return cls(n, (ABSENT,) * num_pairs(n))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "OrientedGraph":
        states = [ABSENT] * num_pairs(n)
        for u, v in arcs:
            if u == v:
                raise ValueError("self loops are not allowed")
            states[pair_index(n, u, v)] = FORWARD if u < v else BACKWARD
        return cls(n, tuple(states))

    def arcs(self) -> list[tuple[int, int]]:
        out = []
        for (u, v), st in zip(pair_list(self.n), self.states):
            if st == FORWARD:
                out.append((u, v))
            elif st == BACKWARD:
                out.append((v, u))
        return out

    def out_masks(self) -> list[int]:
        masks = [0] * self.n
        for (u, v), st in zip(pair_list(self.n), self.states):
            if st == FORWARD:
                masks[u] |= 1 << v
            elif st == BACKWARD:
                masks[v] |= 1 << u
        return masks

    def reverse(self) -> "OrientedGraph":
        flip = (ABSENT, BACKWARD, FORWARD)
        return OrientedGraph(self.n, tuple(flip[s] for s in self.states))

    def edge_count(self) -> int:
        return sum(1 for s in self.states if s != ABSENT)

    def to_dict(self) -> dict:
        return {"n": self.n, "states": "".join(_CHARS[s] for s in self.states)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "OrientedGraph":
        return cls(int(obj["n"]), tuple(_CHARS.index(c) for c in obj["states"]))

    @classmethod
    def from_json(cls, text: str) -> "OrientedGraph":
        return cls.from_dict(json.loads(text))


def _check_vertex(g: OrientedGraph, v: int) -> None:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")


def _closure(masks: Sequence[int], v: int, target: int | None = None) -> int:
    seen = 1 << v
    frontier = seen
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= masks[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & ~seen
        seen |= frontier
        if target is not None and seen >> target & 1:
            break
    return seen


def _mask_to_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def reaches(g: OrientedGraph, u: int, v: int) -> bool:
    """True iff a directed path ``u -> ... -> v`` exists (reflexive)."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return True
    return bool(_closure(g.out_masks(), u, v) >> v & 1)


def out_cluster(g: OrientedGraph, v: int) -> frozenset[int]:
    _check_vertex(g, v)
    return _mask_to_set(_closure(g.out_masks(), v))


def in_cluster(g: OrientedGraph, v: int) -> frozenset[int]:
    _check_vertex(g, v)
    return _mask_to_set(_closure(g.reverse().out_masks(), v))


# -- batched reachability ---------------------------------------------------
#
# Batches are int8 arrays of shape (B, n(n-1)/2) holding pair states.  Up to
# n = 63 the closure works on uint64 bitmasks; beyond that on bool matrices.


def batch_out_masks(states: np.ndarray, n: int) -> np.ndarray:
    """Successor bitmasks, shape ``(B, n)`` uint64."""
    if n > 63:
        raise ValueError("bitmask batches support n <= 63")
    states = np.asarray(states)
    out = np.zeros((states.shape[0], n), dtype=np.uint64)
    one = np.uint64(1)
    for k, (u, v) in enumerate(pair_list(n)):
        col = states[:, k]
        out[:, u] |= np.where(col == FORWARD, one << np.uint64(v), np.uint64(0))
        out[:, v] |= np.where(col == BACKWARD, one << np.uint64(u), np.uint64(0))
    return out


def batch_reach_masks(out: np.ndarray, src: int) -> np.ndarray:
    """Out-cluster bitmask of ``src`` for every graph in the batch."""
    n = out.shape[1]
    seen = np.full(out.shape[0], np.uint64(1) << np.uint64(src), dtype=np.uint64)
    one = np.uint64(1)
    for _ in range(n):
        nxt = seen.copy()
        for u in range(n):
            has = (seen >> np.uint64(u)) & one
            nxt |= out[:, u] * has
        if np.array_equal(nxt, seen):
            break
        seen = nxt
    return seen


def batch_reaches(states: np.ndarray, n: int, pairs: Sequence[tuple[int, int]]) -> list[np.ndarray]:
    """For each ``(u, v)`` in ``pairs``, a bool array: does ``u`` reach ``v``?"""
    states = np.asarray(states)
    if n <= 63:
        out = batch_out_masks(states, n)
        cache: dict[int, np.ndarray] = {}
        res = []
        for u, v in pairs:
            if u not in cache:
                cache[u] = batch_reach_masks(out, u)
            res.append(((cache[u] >> np.uint64(v)) & np.uint64(1)).astype(bool))
        return res
    adj = np.zeros((states.shape[0], n, n), dtype=bool)
    for k, (u, v) in enumerate(pair_list(n)):
        adj[:, u, v] = states[:, k] == FORWARD
        adj[:, v, u] = states[:, k] == BACKWARD
    res = []
    cache_b: dict[int, np.ndarray] = {}
    for u, v in pairs:
        if u not in cache_b:
            seen = np.zeros((states.shape[0], n), dtype=bool)
            seen[:, u] = True
            while True:
                nxt = seen | np.any(seen[:, :, None] & adj, axis=1)
                if np.array_equal(nxt, seen):
                    break
                seen = nxt
            cache_b[u] = seen
        res.append(cache_b[u][:, v].copy())
    return res


# -- samplers ---------------------------------------------------------------


def derive_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream number ``index`` under ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _check_p(p) -> float:
    pf = Fraction(p) if not isinstance(p, float) else p
    if not 0 <= pf <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(pf)


def gnp_states(rng: np.random.Generator, n: int, p, size: int) -> np.ndarray:
    pf = _check_p(p)
    u = rng.random((size, num_pairs(n)))
    states = np.zeros(u.shape, dtype=np.int8)
    states[u < pf / 2] = FORWARD
    states[(u >= pf / 2) & (u < pf)] = BACKWARD
    return states


def gnm_states(rng: np.random.Generator, n: int, m: int, size: int) -> np.ndarray:
    """Uniform ``m``-subsets via the ``m`` smallest of i.i.d. uniform keys."""
    N = num_pairs(n)
    if not 0 <= m <= N:
        raise ValueError(f"m must lie in [0, {N}], got {m}")
    states = np.zeros((size, N), dtype=np.int8)
    if m == 0 or size == 0:
        return states
    keys = rng.random((size, N))
    chosen = np.argpartition(keys, m - 1, axis=1)[:, :m] if m < N else np.tile(np.arange(N), (size, 1))
    dirs = rng.integers(FORWARD, BACKWARD + 1, size=(size, m), dtype=np.int8)
    np.put_along_axis(states, chosen, dirs, axis=1)
    return states


def sample_gnp_oriented(n: int, p, seed: int) -> OrientedGraph:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return OrientedGraph(n, tuple(int(s) for s in gnp_states(rng, n, p, 1)[0]))


def sample_tournament(n: int, seed: int) -> OrientedGraph:
    return sample_gnp_oriented(n, 1, seed)


def sample_gnm_oriented(n: int, m: int, seed: int) -> OrientedGraph:
    """Partial Fisher-Yates over pair indices, then one coin per chosen pair."""
    N = num_pairs(n)
    if not 0 <= m <= N:
        raise ValueError(f"m must lie in [0, {N}], got {m}")
    rng = np.random.default_rng(seed)
    idx = list(range(N))
    for i in range(m):
        j = int(rng.integers(i, N))
        idx[i], idx[j] = idx[j], idx[i]
    states = [ABSENT] * N
    coins = rng.integers(0, 2, size=m)
    for k, c in zip(idx[:m], coins):
        states[k] = FORWARD if c == 0 else BACKWARD
    return OrientedGraph(n, tuple(states))
