"""Exact cluster recursions for randomly oriented ``G(n, p)``.

Two memoized quantities drive everything:

``d(n, k)``
    probability that the out-cluster of a fixed vertex is a fixed ``k``-set
    containing it.
``N(n, tau, alpha, r)``
    probability that the out-cluster of ``t`` is a fixed set ``T`` with
    ``|T| = tau`` and the in-cluster of ``a`` is a fixed set ``A`` with
    ``|A| = alpha``, where ``r`` vertices lie outside ``A | T``.  The overlap
    ``j = tau + alpha - (n - r)`` is never 1.

From these, ``P(s -/-> a)`` and ``P(s -/-> a, t -/-> b)`` are sums over
cluster shapes.  In the joint sum, the term where ``s`` lies in the
out-cluster of ``t`` and the clusters are disjoint runs ``alpha`` from 1
(``A`` holds ``a`` plus any subset of the ``n - tau - 1`` vertices outside
``T`` other than ``a``); this was pinned against exhaustive enumeration.

The engine is generic over the coefficient ring: it only needs ``+``, ``-``,
``*`` and integer powers, so :class:`~orientcorr.poly.Poly` gives symbolic
results and :class:`fractions.Fraction` gives exact values at a fixed ``p``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Optional, Union

from .poly import Poly, atoms

__all__ = [
    "NpKey",
    "Recursion",
    "symbolic",
    "at",
    "d_poly",
    "np_poly",
    "p_not_reach",
    "p_joint_not_reach",
    "covariance_poly",
    "relative_covariance",
    "p_not_reach_at",
    "p_joint_not_reach_at",
    "Method",
    "CorrelationReport",
    "correlation_report",
]


@dataclass(frozen=True)
class NpKey:
    n: int
    tau: int
    alpha: int
    r: int

    @property
    def j(self) -> int:
        return self.alpha + self.tau - (self.n - self.r)

    def validate(self) -> None:
        n, tau, alpha, r = self.n, self.tau, self.alpha, self.r
        if n < 2 or tau < 1 or alpha < 1 or r < 0:
            raise ValueError(f"invalid cluster key {self}")
        if n - r < max(tau, alpha) or tau + alpha < n - r:
            raise ValueError(f"cluster sizes do not fit: {self}")
        if self.j == 1:
            raise ValueError(f"overlap of size 1 is impossible: {self}")

    def swapped(self) -> "NpKey":
        return NpKey(self.n, self.alpha, self.tau, self.r)


class Recursion:
    """Write-once memo tables for ``d`` and ``N`` over one coefficient ring.

    With ``canonical=True`` keys are stored with ``tau <= alpha``.  With
    ``canonical=False`` the swap symmetry is never used: every key is
    reduced by peeling vertices off the ``A`` side when ``A`` has a vertex
    outside ``T``, and off the ``T`` side otherwise.
    """

    def __init__(self, x, y, q, one, canonical: bool = True):
        self.x, self.y, self.q, self.one = x, y, q, one
        self.zero = one - one
        self.canonical = canonical
        self._d: dict[int, Any] = {}
        self._n: dict[tuple[int, int, int], Any] = {}
        self._ypow = [one]
        self._qpow = [one]
        self._lock = threading.RLock()
        self._filled = 1

    # -- powers -------------------------------------------------------------

    def ypow(self, k: int):
        pw = self._ypow
        while len(pw) <= k:
            pw.append(pw[-1] * self.y)
        return pw[k]

    def qpow(self, k: int):
        pw = self._qpow
        while len(pw) <= k:
            pw.append(pw[-1] * self.q)
        return pw[k]

    # -- d ------------------------------------------------------------------

    def dd(self, k: int):
        """``d(k, k)``: the out-cluster of a vertex in ``K_k`` is everything."""
        if k < 1:
            raise ValueError("k must be >= 1")
        with self._lock:
            for m in range(1, k + 1):
                if m in self._d:
                    continue
                total = self.one
                for i in range(1, m):
                    total = total - comb(m - 1, i - 1) * self._d[i] * self.ypow(i * (m - i))
                self._d[m] = total
            return self._d[k]

    def d(self, n: int, k: int):
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
        return self.dd(k) * self.ypow(k * (n - k))

    # -- N ------------------------------------------------------------------

    def N(self, n: int, tau: int, alpha: int, r: int = 0):
        key = NpKey(n, tau, alpha, r)
        key.validate()
        with self._lock:
            self._fill(n - r)
            if r > 0:
                j = key.j
                core = self._n0(n - r, tau, alpha)
                return core * self.qpow(r * j) * self.ypow(r * (2 * n - 2 * r - tau - alpha))
            return self._n0(n, tau, alpha)

    def _fill(self, n: int) -> None:
        # bottom-up in the vertex count keeps the call stack shallow
        while self._filled < n:
            m = self._filled + 1
            for tau in range(1, m + 1):
                for alpha in range(1, m + 1):
                    j = tau + alpha - m
                    if j == 0 or (j >= 2 and not (tau == alpha == m)):
                        self._n0(m, tau, alpha)
            self._n0(m, m, m)
            self._filled = m

    def _n0(self, n: int, tau: int, alpha: int):
        if self.canonical and tau > alpha:
            tau, alpha = alpha, tau
        key = (n, tau, alpha)
        val = self._n.get(key)
        if val is None:
            val = self._compute(n, tau, alpha)
            self._n[key] = val
        return val

    def _compute(self, n: int, tau: int, alpha: int):
        if n == 2 and tau == alpha == 2:
            return self.x
        if n == 2 and tau == alpha == 1:
            return self.y
        if tau == alpha == n:
            return self._all_in(n)
        j = tau + alpha - n
        if j >= 2:
            # A \ T is empty only when T is everything
            return self._peel_a(n, tau, alpha) if tau < n else self._peel_t(n, tau, alpha)
        if j == 0:
            return self._peel_a(n, tau, alpha) if alpha >= 2 else self._peel_t(n, tau, alpha)
        raise ValueError(f"no recursion applies to N({n}, {tau}, {alpha}, 0)")

    def _peel_a(self, n: int, tau: int, alpha: int):
        """Remove the part ``Z`` of ``A`` that reaches ``a`` only through a
        fixed vertex ``z`` in ``A \\ T``."""
        j = tau + alpha - n
        total = self.zero
        if j >= 2:
            for zeta in range(1, n - tau + 1):
                term = (
                    comb(n - tau - 1, zeta - 1)
                    * self._n0(n - zeta, tau, alpha - zeta)
                    * self.dd(zeta)
                    * self.qpow((zeta - 1) * j)
                    * self.ypow((zeta - 1) * (2 * n - tau - alpha - zeta))
                    * (self.ypow(tau) - self.ypow(2 * n - alpha - tau - zeta) * self.qpow(j))
                )
                total = total + term
        else:
            for zeta in range(1, alpha):
                term = (
                    comb(alpha - 2, zeta - 1)
                    * self._n0(n - zeta, tau, alpha - zeta)
                    * self.dd(zeta)
                    * self.ypow((zeta - 1) * (tau + alpha - zeta) + tau)
                    * (self.one - self.ypow(alpha - zeta))
                )
                total = total + term
        return total

    def _peel_t(self, n: int, tau: int, alpha: int):
        """Mirror of :meth:`_peel_a` under arc reversal (``A`` and ``T`` swap)."""
        j = tau + alpha - n
        total = self.zero
        if j >= 2:
            for zeta in range(1, n - alpha + 1):
                term = (
                    comb(n - alpha - 1, zeta - 1)
                    * self._n0(n - zeta, tau - zeta, alpha)
                    * self.dd(zeta)
                    * self.qpow((zeta - 1) * j)
                    * self.ypow((zeta - 1) * (2 * n - tau - alpha - zeta))
                    * (self.ypow(alpha) - self.ypow(2 * n - alpha - tau - zeta) * self.qpow(j))
                )
                total = total + term
        else:
            for zeta in range(1, tau):
                term = (
                    comb(tau - 2, zeta - 1)
                    * self._n0(n - zeta, tau - zeta, alpha)
                    * self.dd(zeta)
                    * self.ypow((zeta - 1) * (tau + alpha - zeta) + alpha)
                    * (self.one - self.ypow(tau - zeta))
                )
                total = total + term
        return total

    def _all_in(self, n: int):
        """``N(n, n, n, 0)`` as one minus every other cluster configuration."""
        return self.one - self.shape_total(n, include_full=False)

    def shape_total(self, n: int, include_full: bool = True):
        """Sum of ``N`` over all (T, A) pairs on ``[n]`` with ``t in T``, ``a in A``."""
        total = self.zero
        for j in range(2, n):
            cj = comb(n - 2, j - 2)
            for tau in range(j, n + 1):
                ct = comb(n - j, tau - j)
                for alpha in range(j, n - tau + j + 1):
                    r = n - alpha - tau + j
                    total = total + cj * ct * comb(n - tau, alpha - j) * self._nr(n, tau, alpha, r)
        for tau in range(1, n):
            for alpha in range(1, n - tau + 1):
                r = n - alpha - tau
                total = total + comb(n - 2, tau - 1) * comb(n - tau - 1, alpha - 1) * self._nr(n, tau, alpha, r)
        if include_full:
            total = total + self._n0(n, n, n)
        return total

    def _nr(self, n: int, tau: int, alpha: int, r: int):
        if r == 0:
            return self._n0(n, tau, alpha)
        j = tau + alpha - (n - r)
        return self._n0(n - r, tau, alpha) * self.qpow(r * j) * self.ypow(r * (2 * n - 2 * r - tau - alpha))

    # -- event probabilities -------------------------------------------------

    def not_reach(self, n: int):
        """``P(s -/-> a)``: the out-cluster of one vertex misses another."""
        if n < 2:
            raise ValueError("need n >= 2")
        total = self.zero
        for k in range(1, n):
            total = total + comb(n - 2, k - 1) * self.d(n, k)
        return total

    def joint_not_reach(self, n: int):
        """``P(s -/-> a, t -/-> b)`` for four distinct vertices."""
        if n < 4:
            raise ValueError("need n >= 4")
        with self._lock:
            self._fill(n)
            nr = self._nr
            total = self.zero
            for j in range(2, n - 1):
                cj = comb(n - 4, j - 2)
                part = self.zero
                # s outside T
                for tau in range(j, n - 1):
                    ct = comb(n - 2 - j, tau - j)
                    for alpha in range(j, n - tau + j):
                        part = part + ct * comb(n - tau - 1, alpha - j) * nr(n, tau, alpha, n - alpha - tau + j)
                # s inside T
                for tau in range(j + 1, n):
                    ct = comb(n - 2 - j, tau - j - 1)
                    for alpha in range(j, n - tau + j + 1):
                        part = part + ct * comb(n - tau, alpha - j) * nr(n, tau, alpha, n - alpha - tau + j)
                total = total + cj * part
            # disjoint clusters, s outside T
            for tau in range(1, n - 2):
                for alpha in range(1, n - tau):
                    total = total + comb(n - 4, tau - 1) * comb(n - tau - 2, alpha - 1) * nr(n, tau, alpha, n - alpha - tau)
            # disjoint clusters, s inside T
            for tau in range(2, n - 1):
                for alpha in range(1, n - tau + 1):
                    total = total + comb(n - 4, tau - 2) * comb(n - tau - 1, alpha - 1) * nr(n, tau, alpha, n - alpha - tau)
            return total

    def covariance(self, n: int):
        pa = self.not_reach(n)
        return self.joint_not_reach(n) - pa * pa


# -- shared engines ----------------------------------------------------------

_symbolic: Optional[Recursion] = None
_engines_lock = threading.Lock()


def symbolic() -> Recursion:
    """Process-wide engine over exact polynomials in ``p``."""
    global _symbolic
    with _engines_lock:
        if _symbolic is None:
            x, y, q = atoms()
            _symbolic = Recursion(x, y, q, Poly([1]))
        return _symbolic


@lru_cache(maxsize=256)
def at(p: Fraction) -> Recursion:
    """Engine over exact rationals at a fixed ``p``."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return Recursion(p / 2, 1 - p / 2, 1 - p, Fraction(1))


def d_poly(n: int, k: int) -> Poly:
    return symbolic().d(n, k)


def np_poly(n: int, tau: int, alpha: int, r: int) -> Poly:
    return symbolic().N(n, tau, alpha, r)


def p_not_reach(n: int) -> Poly:
    return symbolic().not_reach(n)


def p_joint_not_reach(n: int) -> Poly:
    return symbolic().joint_not_reach(n)


def covariance_poly(n: int) -> Poly:
    return symbolic().covariance(n)


def p_not_reach_at(n: int, p) -> Fraction:
    return at(Fraction(p)).not_reach(n)


def p_joint_not_reach_at(n: int, p) -> Fraction:
    return at(Fraction(p)).joint_not_reach(n)


def relative_covariance(n: int, p) -> Fraction:
    """``(P(A B) - P(A) P(B)) / P(A B)`` exactly at a rational ``p``."""
    p = Fraction(p)
    if n < 4:
        raise ValueError("need n >= 4")
    eng = at(p)
    joint = eng.joint_not_reach(n)
    pa = eng.not_reach(n)
    if joint == 0:
        raise ZeroDivisionError("joint probability vanishes")
    return (joint - pa * pa) / joint


class Method(str, Enum):
    EXACT = "ExactRecursion"
    ORACLE = "Oracle"
    MONTE_CARLO = "MonteCarlo"


Value = Union[Fraction, Poly, float]


@dataclass(frozen=True)
class CorrelationReport:
    n: int
    p: Optional[Fraction]
    pA: Value
    pB: Value
    pJoint: Value
    covariance: Value
    relativeCovariance: Optional[Value]
    method: Method


def correlation_report(n: int, p=None) -> CorrelationReport:
    """Exact report, symbolic when ``p`` is None (relative covariance then omitted)."""
    if n < 4:
        raise ValueError("need n >= 4")
    if p is None:
        eng = symbolic()
        pa, pj = eng.not_reach(n), eng.joint_not_reach(n)
        return CorrelationReport(n, None, pa, pa, pj, pj - pa * pa, None, Method.EXACT)
    p = Fraction(p)
    eng = at(p)
    pa, pj = eng.not_reach(n), eng.joint_not_reach(n)
    cov = pj - pa * pa
    return CorrelationReport(n, p, pa, pa, pj, cov, cov / pj, Method.EXACT)
