"""Reachability correlations in randomly oriented graphs.

For four distinct vertices ``s, a, t, b`` this package computes how the
events ``{s -/-> a}`` and ``{t -/-> b}`` correlate in random tournaments and
in randomly oriented ``G(n, p)`` and ``G(n, m)``: exactly through cluster
recursions, by brute-force enumeration for small ``n``, and by sampling.
"""
from .poly import Poly, atoms
from .graphs import OrientedGraph, reaches, out_cluster, in_cluster
from .recursion import (
    covariance_poly,
    d_poly,
    np_poly,
    p_joint_not_reach,
    p_not_reach,
    relative_covariance,
)

__all__ = [
    "Poly",
    "atoms",
    "OrientedGraph",
    "reaches",
    "out_cluster",
    "in_cluster",
    "d_poly",
    "np_poly",
    "p_not_reach",
    "p_joint_not_reach",
    "covariance_poly",
    "relative_covariance",
]
