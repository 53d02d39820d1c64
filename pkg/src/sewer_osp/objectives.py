"""Entry-set sizes and the two placement objectives.

A sensor's entry set is the group of manholes for which it is the first sensor
downstream. Coverage is the total size of all entry sets; the expected search
cost is the entry-set-weighted mean of ``log2(m_i)``.
"""

from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import numpy as np

from .network import UpstreamIndex

PlacementPlan = tuple[int, ...]


class ObjectiveVector(NamedTuple):
    coverage: int
    search_cost: float


EMPTY_OBJECTIVES = ObjectiveVector(0, 0.0)


def make_plan(sensors: Iterable[int], n: int | None = None) -> PlacementPlan:
    """Canonical (sorted, duplicate-free) plan tuple."""
    plan = tuple(sorted(int(s) for s in sensors))
    if len(set(plan)) != len(plan):
        raise ValueError("plan contains duplicate sensors")
    if n is not None and plan and (plan[0] < 0 or plan[-1] >= n):
        raise IndexError("plan contains an out-of-range node id")
    return plan


def xlog2x(m: int) -> float:
    return m * math.log2(m) if m > 1 else 0.0


def cost_from_sizes(sizes: Iterable[int]) -> float:
    """Search cost from a multiset of entry-set sizes.

    ``fsum`` makes the result independent of summation order, so incremental
    and from-scratch evaluations of the same plan agree bit for bit.
    """
    sizes = list(sizes)
    total = sum(sizes)
    if total == 0:
        return 0.0
    return math.fsum(xlog2x(m) for m in sizes) / total


def _checked(plan, idx: UpstreamIndex) -> np.ndarray:
    p = np.asarray(make_plan(plan), dtype=np.int64)
    if p.size and (p[0] < 0 or p[-1] >= idx.n):
        raise IndexError("plan contains an out-of-range node id")
    return p


def entry_set_sizes(plan, idx: UpstreamIndex) -> dict[int, int]:
    """Entry-set size of every sensor in ``plan``.

    Sensors are swept upstream-first; each one's size is its upstream closure
    minus the sizes already assigned to sensors upstream of it.
    """
    p = _checked(plan, idx)
    if not p.size:
        return {}
    p = p[np.argsort(idx.topo_pos[p], kind="stable")]
    upstream_of = idx.up_set[np.ix_(p, p)]
    m = idx.up_size[p].copy()
    for a in range(len(p)):
        # upstream sensors come earlier in the sweep, so their m is final
        m[a] -= m[upstream_of[a]].sum()
    return {int(s): int(v) for s, v in zip(p, m)}


def coverage(m: dict[int, int]) -> int:
    return int(sum(m.values()))


def expected_search_cost(m: dict[int, int]) -> float:
    return cost_from_sizes(m.values())


def evaluate_plan(plan, idx: UpstreamIndex) -> ObjectiveVector:
    m = entry_set_sizes(plan, idx)
    return ObjectiveVector(coverage(m), expected_search_cost(m))


def is_feasible(plan, S: int) -> bool:
    return len(plan) == S


def owner_array(plan, idx: UpstreamIndex) -> np.ndarray:
    """Nearest downstream sensor of each node (itself if it is a sensor), -1 if uncovered."""
    p = _checked(plan, idx)
    owner = np.full(idx.n, -1, dtype=np.int64)
    # downstream sensors first so upstream ones overwrite their share
    for s in p[np.argsort(-idx.topo_pos[p], kind="stable")].tolist():
        owner[idx.up_set[s]] = s
        owner[s] = s
    return owner


def assign_entry_sets(plan, idx: UpstreamIndex) -> dict[int, int]:
    """Map every covered node to the sensor whose entry set contains it."""
    owner = owner_array(plan, idx)
    covered = np.flatnonzero(owner >= 0)
    return dict(zip(covered.tolist(), owner[covered].tolist()))
