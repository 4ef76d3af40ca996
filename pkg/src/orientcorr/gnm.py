"""Randomly oriented ``G(n, m)``: constraint probabilities and asymptotics.

``q(l; n, m)`` is the probability that ``l`` fixed pairs of ``K_n`` each fail
to carry an arc in one prescribed direction.  Conditioning on how many of
those pairs are present gives the hypergeometric sum used by :func:`q_exact`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp, floor

from . import oracle
from .graphs import gnm_states, num_pairs
from .montecarlo import McEstimate, estimate_blocks
from .recursion import p_joint_not_reach_at, p_not_reach_at


@dataclass(frozen=True)
class GnmParams:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.m <= self.N:
            raise ValueError(f"m must lie in [0, {self.N}], got {self.m}")

    @property
    def N(self) -> int:
        return num_pairs(self.n)

    @property
    def p(self) -> Fraction:
        return Fraction(self.m, self.N) if self.N else Fraction(0)

    @classmethod
    def from_p(cls, n: int, p) -> "GnmParams":
        """``m = floor(p * C(n, 2))``."""
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        return cls(n, floor(p * num_pairs(n)))


def q_exact(l: int, params: GnmParams) -> Fraction:
    N, m = params.N, params.m
    if not 0 <= l <= N:
        raise ValueError(f"l must lie in [0, {N}], got {l}")
    total = 0
    # k of the l constrained pairs are present, each pointing the allowed way
    for k in range(0, min(l, m) + 1):
        total += Fraction(comb(l, k) * comb(N - l, m - k), 2**k)
    return total / comb(N, m)


def _curvature(p: float) -> float:
    return p * (1 - p) / (2 - p) ** 2


def q_asymptotic(l: int, params: GnmParams) -> float:
    p = float(params.p)
    y = 1 - p / 2
    if p in (0.0, 1.0):
        return y**l
    return y**l * exp(-((l / params.n) ** 2) * _curvature(p))


def q_upper_bound_check(l: int, params: GnmParams) -> bool:
    """``q(l; n, m) <= (1 - p/2)**l`` with ``p = m / C(n, 2)``, exactly."""
    return q_exact(l, params) <= (1 - params.p / 2) ** l


def _open_p(p: float) -> float:
    p = float(p)
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return p


def gnm_joint_asymptotic(n: int, p: float) -> float:
    p = _open_p(p)
    y = 1 - p / 2
    damp = exp(-4 * _curvature(p))
    return 2 * y ** (2 * n - 4) * damp + 2 * y ** (2 * n - 3) * damp


def gnm_marginal_asymptotic(n: int, p: float) -> float:
    p = _open_p(p)
    return 2 * (1 - p / 2) ** (n - 1) * exp(-_curvature(p))


def f_function(p: float) -> float:
    """Limit of ``P(A) P(B) / P(A B)``; the relative covariance tends to ``1 - f``."""
    p = float(p)
    if not 0 <= p < 1:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    return 2 * (1 - p / 2) ** 2 / (2 - p / 2) * exp(2 * _curvature(p))


def f_derivative(p: float) -> float:
    p = _open_p(p)
    return exp(2 * _curvature(p)) * (p**3 - 4 * p**2 - 8) / ((4 - p) ** 2 * (2 - p))


def relative_covariance_limit(p: float) -> float:
    return 1 - f_function(p)


# -- exact small-n values and simulation ---------------------------------------


def gnm_exact(n: int, m: int) -> dict[str, Fraction]:
    """Exact ``P(A)``, ``P(A B)`` and covariance by enumeration (``4 <= n <= 6``)."""
    params = GnmParams(n, m)
    pa = oracle.gnm_enumeration_counts(n, oracle.NOT_REACH)[params.m]
    pj = oracle.gnm_enumeration_counts(n, oracle.JOINT_NOT_REACH)[params.m]
    return {"pA": pa, "pJoint": pj, "covariance": pj - pa * pa}


def gnm_mc_covariance(n: int, m: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    if n < 4:
        raise ValueError("need n >= 4")
    GnmParams(n, m)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    return estimate_blocks(lambda rng, size: gnm_states(rng, n, m, size), n, samples, seed, workers)


def compare_gnp_gnm(n: int) -> list[dict]:
    """Exact covariances of both models at ``p = m / C(n, 2)`` for every ``m``.

    Exploratory only: rows are reported, no ordering is asserted.
    """
    N = num_pairs(n)
    rows = []
    for m in range(N + 1):
        p = Fraction(m, N)
        gnp_cov = p_joint_not_reach_at(n, p) - p_not_reach_at(n, p) ** 2
        rows.append({"m": m, "p": p, "gnp": gnp_cov, "gnm": gnm_exact(n, m)["covariance"]})
    return rows
