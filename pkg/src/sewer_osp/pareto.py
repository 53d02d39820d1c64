"""Dominance, non-dominated sorting, crowding distance and 2-D hypervolume.

Objective vectors are ``(coverage, search_cost)``: coverage is maximised and
cost minimised. Only :func:`normalize_points` flips senses; the hypervolume
works on normalised points where both coordinates are minimised.
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def dominates(a, b) -> bool:
    """True iff ``a`` is at least as good as ``b`` in both objectives and better in one."""
    return (a[0] >= b[0] and a[1] <= b[1]) and (a[0] > b[0] or a[1] < b[1])


@dataclass
class FrontAssignment:
    fronts: list[list[int]]
    rank: np.ndarray


def non_dominated_sort(points: Sequence) -> FrontAssignment:
    """Partition points into Pareto fronts.

    Two objectives allow an ``O(N log N)`` sweep: after sorting by coverage
    (descending) then cost, a distinct vector is dominated by a front exactly
    when that front already holds a cost no larger than its own, and the
    fronts' minimum costs increase with front index, so a bisection finds the
    rank. Equal vectors share a rank. Indices within each front keep input
    order.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    rank = np.zeros(n, dtype=np.int64)
    if n == 0:
        return FrontAssignment([], rank)
    order = np.lexsort((pts[:, 1], -pts[:, 0]))
    front_min: list[float] = []
    prev = None
    prev_rank = 0
    for i in order.tolist():
        key = (pts[i, 0], pts[i, 1])
        if key == prev:
            rank[i] = prev_rank
            continue
        r = bisect.bisect_right(front_min, key[1])
        if r == len(front_min):
            front_min.append(key[1])
        else:
            front_min[r] = key[1]
        rank[i] = r
        prev, prev_rank = key, r
    fronts = [[] for _ in range(len(front_min))]
    for i in range(n):
        fronts[rank[i]].append(i)
    return FrontAssignment(fronts, rank)


def crowding_distance(front: Sequence) -> np.ndarray:
    """NSGA-II crowding distance of each point in one front.

    Points holding an objective's extreme value get ``inf``. Neighbours are
    taken over distinct values so tied points get identical distances,
    whatever their input order.
    """
    pts = np.asarray(front, dtype=float).reshape(-1, 2)
    n = len(pts)
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for k in range(pts.shape[1]):
        col = pts[:, k]
        values = np.unique(col)
        span = values[-1] - values[0]
        if span == 0:
            continue
        pos = np.searchsorted(values, col)
        boundary = (pos == 0) | (pos == len(values) - 1)
        inner = ~boundary
        dist[boundary] = np.inf
        dist[inner] += (values[pos[inner] + 1] - values[pos[inner] - 1]) / span
    return dist


@dataclass(frozen=True)
class NormalizationBounds:
    cov_min: float
    cov_max: float
    cost_min: float
    cost_max: float

    @classmethod
    def from_points(cls, *collections) -> "NormalizationBounds":
        pts = np.concatenate([np.asarray(c, dtype=float).reshape(-1, 2) for c in collections])
        if not len(pts):
            raise ValueError("cannot derive bounds from an empty collection")
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        return cls(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))

    def as_dict(self) -> dict:
        return {"coverage": [self.cov_min, self.cov_max], "search_cost": [self.cost_min, self.cost_max]}


def normalize_points(points, bounds: NormalizationBounds) -> np.ndarray:
    """Map objective vectors into ``[0, 1]^2`` with 0 best on both axes."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    out = np.zeros_like(pts)
    cov_span = bounds.cov_max - bounds.cov_min
    cost_span = bounds.cost_max - bounds.cost_min
    if cov_span > 0:
        out[:, 0] = (bounds.cov_max - pts[:, 0]) / cov_span
    if cost_span > 0:
        out[:, 1] = (pts[:, 1] - bounds.cost_min) / cost_span
    if np.any((out < 0) | (out > 1)):
        warnings.warn("points outside normalization bounds were clamped", RuntimeWarning, stacklevel=2)
        out = np.clip(out, 0.0, 1.0)
    return out


def hypervolume_2d(points, ref=(1.0, 1.0)) -> float:
    """Area dominated by minimisation points and bounded by ``ref``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    pts = pts[(pts[:, 0] < ref[0]) & (pts[:, 1] < ref[1])]
    if not len(pts):
        return 0.0
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    area = 0.0
    best_v = ref[1]
    for u, v in pts:
        if v < best_v:
            area += (ref[0] - u) * (best_v - v)
            best_v = v
    return float(area)


def front_hypervolume(objectives, bounds: NormalizationBounds) -> float:
    """Hypervolume of raw objective vectors under ``bounds``, reference (1, 1)."""
    return hypervolume_2d(normalize_points(objectives, bounds))
