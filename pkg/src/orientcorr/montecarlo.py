"""Sampling estimators for ``P(A)``, ``P(B)``, ``P(A B)`` and the covariance.

Samples are split into consecutive blocks of :data:`BLOCK` indices; block
``b`` draws from ``derive_rng(seed, b)``.  Blocks only contribute integer
counts, so the estimate is the same whatever the number of workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import sqrt
from typing import Callable

import numpy as np

from .graphs import A, B, S, T, batch_reaches, derive_rng, gnp_states
from .oracle import EstimateCI

BLOCK = 1 << 14

Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass(frozen=True)
class McEstimate:
    pA: EstimateCI
    pB: EstimateCI
    pJoint: EstimateCI
    covariance: EstimateCI

    def items(self):
        return [("pA", self.pA), ("pB", self.pB), ("pJoint", self.pJoint), ("covariance", self.covariance)]


def _block_counts(sampler: Sampler, n: int, seed: int, b: int, size: int) -> tuple[int, int, int]:
    states = sampler(derive_rng(seed, b), size)
    sa, tb = batch_reaches(states, n, [(S, A), (T, B)])
    x, y = ~sa, ~tb
    return int(x.sum()), int(y.sum()), int((x & y).sum())


def moments_to_estimate(sx: int, sy: int, sxy: int, samples: int, seed: int) -> McEstimate:
    """Plug-in means and a delta-method error for ``mean(XY) - mean(X) mean(Y)``."""
    mx, my, mxy = sx / samples, sy / samples, sxy / samples

    def bern(m: float) -> EstimateCI:
        return EstimateCI(m, sqrt(max(m * (1 - m), 0.0) / samples), samples, seed)

    # covariance matrix of (X, Y, XY); every product of indicators is an indicator
    vx, vy, vxy = mx - mx * mx, my - my * my, mxy - mxy * mxy
    cxy = mxy - mx * my
    cx_xy = mxy - mx * mxy
    cy_xy = mxy - my * mxy
    g = (-my, -mx, 1.0)
    var = (
        g[0] ** 2 * vx + g[1] ** 2 * vy + g[2] ** 2 * vxy
        + 2 * g[0] * g[1] * cxy + 2 * g[0] * g[2] * cx_xy + 2 * g[1] * g[2] * cy_xy
    )
    cov = EstimateCI(mxy - mx * my, sqrt(max(var, 0.0) / samples), samples, seed)
    return McEstimate(bern(mx), bern(my), bern(mxy), cov)


def estimate_blocks(sampler: Sampler, n: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    sizes = [min(BLOCK, samples - start) for start in range(0, samples, BLOCK)]
    jobs = [(b, size) for b, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _block_counts(sampler, n, seed, *job), jobs))
    else:
        parts = [_block_counts(sampler, n, seed, b, size) for b, size in jobs]
    sx = sum(p[0] for p in parts)
    sy = sum(p[1] for p in parts)
    sxy = sum(p[2] for p in parts)
    return moments_to_estimate(sx, sy, sxy, samples, seed)


def mc_gnp(n: int, p, samples: int, seed: int, workers: int = 1) -> McEstimate:
    if n < 4:
        raise ValueError("need n >= 4")
    if samples < 2:
        raise ValueError("samples must be >= 2")
    pf = float(p)
    if not 0 <= pf <= 1:
        raise ValueError("p must lie in [0, 1]")
    return estimate_blocks(lambda rng, size: gnp_states(rng, n, p, size), n, samples, seed, workers)
