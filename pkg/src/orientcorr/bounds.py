"""Tournament bounds, positivity certificates, and ``G(n, p)`` asymptotes.

Certificates use exact rational arithmetic only.  The constant 3.2 in the
marginal upper bound is taken as ``16/5``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

from . import recursion

HALF = Fraction(1, 2)

# P(s -/-> a) in a random tournament, rounded to six decimals
ROUNDED_TOURNAMENT_MARGINALS = {
    4: Fraction("0.25"),
    5: Fraction("0.146484"),
    6: Fraction("0.076416"),
    7: Fraction("0.036942"),
    8: Fraction("0.017427"),
    9: Fraction("0.008309"),
    10: Fraction("0.004038"),
    11: Fraction("0.001988"),
    12: Fraction("0.000986"),
}
TABLE_TOLERANCE = Fraction(5, 10**7)

BOUND_ONLY_FROM = 13


def marginal_bounds(n: int) -> tuple[Fraction, Fraction]:
    if n < 2:
        raise ValueError("need n >= 2")
    scale = HALF ** (n - 2)
    lower = scale * (1 - HALF ** (n - 1))
    upper = scale * (1 + Fraction(16, 5) * Fraction(7, 8) ** (n - 1))
    return lower, upper


def joint_lower_bound(n: int) -> Fraction:
    if n < 4:
        raise ValueError("need n >= 4")
    return HALF ** (2 * n - 4) * (3 - HALF ** (2 * n - 7) - HALF ** (n - 4))


class CertificationPath(str, Enum):
    BOUND_ONLY = "BoundOnly"
    BOUND_PLUS_TABLE = "BoundPlusTable"


@dataclass(frozen=True)
class BoundsReport:
    n: int
    marginalLower: Fraction
    marginalUpper: Fraction
    jointLower: Fraction
    exactMarginal: Optional[Fraction]
    exactJoint: Optional[Fraction]
    covariance: Optional[Fraction]
    positivityCertified: bool
    certificationPath: CertificationPath

    def consistent(self) -> bool:
        if self.exactMarginal is None or self.exactJoint is None:
            return True
        return (
            self.marginalLower <= self.exactMarginal <= self.marginalUpper
            and self.jointLower <= self.exactJoint
        )


def certify_tournament_positivity(n: int, exact: bool = True) -> BoundsReport:
    """Certify ``P(A B) > P(A)**2`` in the random tournament on ``K_n``.

    From ``n = 13`` on, the joint lower bound beats the squared marginal
    upper bound.  Below that the squared marginal is the exact value from the
    recursion at ``p = 1``.  ``exact=False`` skips the exact values on the
    bound-only branch.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    lower, upper = marginal_bounds(n)
    jl = joint_lower_bound(n)
    pa = pj = cov = None
    if exact or n < BOUND_ONLY_FROM:
        eng = recursion.at(Fraction(1))
        pa = eng.not_reach(n)
        pj = eng.joint_not_reach(n)
        cov = pj - pa * pa
    if n >= BOUND_ONLY_FROM:
        path = CertificationPath.BOUND_ONLY
        ok = jl - upper * upper > 0
    else:
        path = CertificationPath.BOUND_PLUS_TABLE
        ok = jl - pa * pa > 0
    return BoundsReport(n, lower, upper, jl, pa, pj, cov, ok, path)


def table_discrepancy(n: int) -> Fraction:
    """``|exact marginal - rounded table entry|`` at ``p = 1``."""
    return abs(recursion.p_not_reach_at(n, 1) - ROUNDED_TOURNAMENT_MARGINALS[n])


def gnp_ratio_curve(n: int, grid: Iterable) -> list[tuple[Fraction, Fraction]]:
    """``P(A B) / (1 - p/2)**(2n - 4)`` exactly at each grid point."""
    if n < 4:
        raise ValueError("need n >= 4")
    out = []
    for p in grid:
        p = Fraction(p)
        eng = recursion.at(p)
        out.append((p, eng.joint_not_reach(n) / eng.ypow(2 * n - 4)))
    return out


def ratio_asymptote(p) -> float:
    return 4 - float(p)


def gnp_asymptote(p) -> float:
    """Large-``n`` limit of the relative covariance, ``p (3 - p) / (4 - p)``."""
    p = float(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return p * (3 - p) / (4 - p)


def gnp_asymptote_exact(p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return p * (3 - p) / (4 - p)
