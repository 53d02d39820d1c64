"""Multi-objective greedy searches over sensor placement plans.

Both searches start from empty plans and grow them one sensor per iteration.
Each iteration pools the current population with its offspring, sorts the
pool into Pareto fronts, moves first-front plans that have exactly ``S``
sensors into a final candidate archive and keeps the best ``N`` smaller plans
(rank, then crowding distance) as the next population. The run stops once the
archive's own first front holds at least ``N`` plans.

:func:`run_eg` samples ``x`` random one-sensor extensions per plan;
:func:`run_nmg` enumerates every extension. :func:`brute_force_pareto` is the
exact answer for small instances.
"""

from __future__ import annotations

import bisect
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .network import UpstreamIndex
from .objectives import (
    EMPTY_OBJECTIVES,
    ObjectiveVector,
    PlacementPlan,
    evaluate_plan,
    make_plan,
    xlog2x,
)
from .pareto import crowding_distance, non_dominated_sort

log = logging.getLogger(__name__)


class CombinatorialCapExceeded(RuntimeError):
    pass


@dataclass
class EGConfig:
    """Search settings.

    ``N`` is both the population size and the number of final solutions
    required before stopping; ``S`` the sensor count every final plan must
    have; ``x`` the offspring sampled per plan (ignored by NMG).
    ``max_iterations`` defaults to ``10 * S``. ``time_budget`` (seconds) is
    checked between iterations.
    """

    N: int = 20
    S: int = 20
    x: int = 20
    seed: int = 0
    max_iterations: int | None = None
    time_budget: float | None = None

    def __post_init__(self):
        if self.max_iterations is None:
            self.max_iterations = 10 * self.S
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.S < 1:
            raise ValueError("S must be >= 1")
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.max_iterations < self.S:
            raise ValueError("max_iterations must be >= S")

    def check_against(self, idx: UpstreamIndex) -> None:
        if self.S > idx.n:
            raise ValueError(f"S={self.S} exceeds network size n={idx.n}")


@dataclass
class Population:
    plans: list[PlacementPlan]
    objectives: list[ObjectiveVector]
    generation: int = 0

    @classmethod
    def empty(cls, N: int) -> "Population":
        # N empty slots; each slot draws its own offspring stream
        return cls([()] * N, [EMPTY_OBJECTIVES] * N, 0)


@dataclass
class FinalCandidateSet:
    plans: dict[PlacementPlan, ObjectiveVector] = field(default_factory=dict)

    def add(self, plan: PlacementPlan, obj: ObjectiveVector) -> bool:
        if plan in self.plans:
            return False
        self.plans[plan] = obj
        return True

    def front(self) -> list[tuple[PlacementPlan, ObjectiveVector]]:
        """First front of the archive, in canonical order."""
        if not self.plans:
            return []
        items = list(self.plans.items())
        fa = non_dominated_sort([o for _, o in items])
        return sorted((items[i] for i in fa.fronts[0]), key=_solution_key)

    def __len__(self) -> int:
        return len(self.plans)


@dataclass
class RunResult:
    algorithm: str
    solutions: list[tuple[PlacementPlan, ObjectiveVector]]
    iterations: int
    wall_time: float
    evaluations: int
    config: dict
    seed: int
    incomplete: bool
    stop_reason: str

    @property
    def objectives(self) -> np.ndarray:
        return np.array([tuple(o) for _, o in self.solutions], dtype=float).reshape(-1, 2)

    def max_coverage_solution(self) -> tuple[PlacementPlan, ObjectiveVector]:
        return max(self.solutions, key=lambda s: (s[1].coverage, -s[1].search_cost))


def _solution_key(item):
    plan, obj = item
    return (-obj.coverage, obj.search_cost, plan)


# --------------------------------------------------------------------------
# incremental evaluation


class PlanExtender:
    """Evaluates all one-sensor extensions of a plan in one vectorised pass.

    Adding sensor ``s`` to a plan only moves nodes out of the entry set of
    ``s``'s nearest downstream sensor ``d`` (or brings in new ones when there
    is none): the new entry set holds the nodes of ``s``'s closure still owned
    by ``d``.
    """

    def __init__(self, idx: UpstreamIndex):
        self.idx = idx
        self.closure = idx.up_set | np.eye(idx.n, dtype=bool)
        self._xlogx = [xlog2x(v) for v in range(idx.n + 1)]

    def extend(self, plan: PlacementPlan, candidates) -> list[ObjectiveVector]:
        cands = np.asarray(candidates, dtype=np.int64)
        if not cands.size:
            return []
        owner = _owners(plan, self.idx)
        d = owner[cands]
        m_new = (self.closure[cands] & (owner[None, :] == d[:, None])).sum(axis=1)
        counts = np.bincount(owner[owner >= 0], minlength=self.idx.n)
        base = [int(counts[s]) for s in plan]
        pos = {s: k for k, s in enumerate(plan)}
        cov = sum(base)
        tab = self._xlogx
        terms = [tab[v] for v in base]
        out = []
        for di, mi in zip(d.tolist(), m_new.tolist()):
            # same terms as cost_from_sizes, so fsum gives the identical float
            t = terms.copy()
            if di >= 0:
                t[pos[di]] = tab[base[pos[di]] - mi]
                c = cov
            else:
                c = cov + mi
            t.append(tab[mi])
            out.append(ObjectiveVector(c, math.fsum(t) / c))
        return out


def spawn_offspring(plan: PlacementPlan, x: int, rng: np.random.Generator, n: int,
                    S: int | None = None) -> list[PlacementPlan]:
    """Up to ``x`` distinct plans, each ``plan`` plus one node drawn without replacement."""
    if S is not None and len(plan) >= S:
        raise ValueError("plan already holds S sensors")
    return [make_plan(plan + (s,)) for s in _sample_nodes(plan, x, rng, n)]


def _free_nodes(plan: PlacementPlan, n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[list(plan)] = False
    return np.flatnonzero(mask)


def _sample_nodes(plan: PlacementPlan, x: int, rng: np.random.Generator, n: int) -> list[int]:
    pool = _free_nodes(plan, n)
    if not len(pool):
        return []
    return pool[rng.choice(len(pool), size=min(x, len(pool)), replace=False)].tolist()


def _generation_rng(seed: int, generation: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(generation,)))


def _owners(plan: PlacementPlan, idx: UpstreamIndex) -> np.ndarray:
    # owner_array without re-validating a plan the search built itself
    owner = np.full(idx.n, -1, dtype=np.int64)
    for s in sorted(plan, key=idx.topo_pos.__getitem__, reverse=True):
        owner[idx.up_set[s]] = s
        owner[s] = s
    return owner


def _with_sensor(plan: PlacementPlan, s: int) -> PlacementPlan:
    k = bisect.bisect_left(plan, s)
    return plan[:k] + (s,) + plan[k:]


# --------------------------------------------------------------------------
# one iteration


@dataclass
class StepStats:
    evaluations: int
    combined: int
    added_to_final: int


def _greedy_step(pop: Population, cfg: EGConfig, final: FinalCandidateSet, idx: UpstreamIndex,
                 extender: PlanExtender, pick: Callable[[PlacementPlan, int], list[int]]):
    plans: list[PlacementPlan] = []
    objs: list[ObjectiveVector] = []
    seen: set[PlacementPlan] = set()
    for plan, obj in zip(pop.plans, pop.objectives):
        if plan not in seen:
            seen.add(plan)
            plans.append(plan)
            objs.append(obj)

    evaluations = 0
    for slot, parent in enumerate(pop.plans):
        nodes = pick(parent, slot)
        evaluations += len(nodes)
        fresh_nodes, fresh_plans = [], []
        for s in nodes:
            child = _with_sensor(parent, s)
            if child not in seen:
                seen.add(child)
                fresh_nodes.append(s)
                fresh_plans.append(child)
        plans.extend(fresh_plans)
        objs.extend(extender.extend(parent, fresh_nodes))

    fa = non_dominated_sort(objs)
    added = 0
    for i in fa.fronts[0]:
        if len(plans[i]) == cfg.S and final.add(plans[i], objs[i]):
            added += 1

    crowd = np.empty(len(plans))
    for members in fa.fronts:
        crowd[members] = crowding_distance([objs[i] for i in members])
    eligible = [i for i in range(len(plans)) if len(plans[i]) < cfg.S]
    # plans repeating an objective vector queue behind one copy of every vector
    eligible.sort(key=lambda i: plans[i])
    copies: dict[ObjectiveVector, int] = {}
    repeat = {}
    for i in eligible:
        repeat[i] = copies.get(objs[i], 0)
        copies[objs[i]] = repeat[i] + 1
    eligible.sort(key=lambda i: (fa.rank[i], repeat[i], -crowd[i], plans[i]))
    chosen = eligible[: cfg.N]
    nxt = Population([plans[i] for i in chosen], [objs[i] for i in chosen], pop.generation + 1)
    return nxt, final, StepStats(evaluations, len(plans), added)


def eg_step(pop: Population, cfg: EGConfig, final: FinalCandidateSet, idx: UpstreamIndex,
            extender: PlanExtender | None = None):
    """One evolutionary-greedy iteration; returns ``(population, final, stats)``."""
    extender = extender or PlanExtender(idx)
    # slots draw from one stream in population order
    rng = _generation_rng(cfg.seed, pop.generation)

    def pick(parent, slot):
        return _sample_nodes(parent, cfg.x, rng, idx.n)

    return _greedy_step(pop, cfg, final, idx, extender, pick)


def nmg_step(pop: Population, cfg: EGConfig, final: FinalCandidateSet, idx: UpstreamIndex,
             extender: PlanExtender | None = None):
    """One NMG iteration: every single-sensor extension of every plan."""
    extender = extender or PlanExtender(idx)

    def pick(parent, slot):
        return _free_nodes(parent, idx.n).tolist()

    return _greedy_step(pop, cfg, final, idx, extender, pick)


# --------------------------------------------------------------------------
# drivers


def _run(name: str, step, idx: UpstreamIndex, cfg: EGConfig) -> RunResult:
    cfg.check_against(idx)
    start = time.perf_counter()
    extender = PlanExtender(idx)
    pop = Population.empty(cfg.N)
    final = FinalCandidateSet()
    evaluations = 0
    iterations = 0
    stop = "max_iterations"
    while iterations < cfg.max_iterations:
        nxt, final, stats = step(pop, cfg, final, idx, extender)
        iterations += 1
        evaluations += stats.evaluations
        front = final.front()
        log.debug("%s iter %d: pool=%d final=%d f1=%d", name, iterations, stats.combined, len(final), len(front))
        if len(front) >= cfg.N:
            stop = "front_full"
            break
        if name == "nmg" and stats.added_to_final == 0 and nxt.plans == pop.plans:
            # NMG steps are deterministic in the population: nothing can change any more
            stop = "converged"
            break
        if not nxt.plans:
            stop = "exhausted"
            break
        pop = nxt
        if cfg.time_budget is not None and time.perf_counter() - start > cfg.time_budget:
            stop = "time_budget"
            break
    solutions = final.front()
    return RunResult(
        algorithm=name,
        solutions=solutions,
        iterations=iterations,
        wall_time=time.perf_counter() - start,
        evaluations=evaluations,
        config=asdict(cfg),
        seed=cfg.seed,
        incomplete=stop != "front_full",
        stop_reason=stop,
    )


def run_eg(idx: UpstreamIndex, cfg: EGConfig) -> RunResult:
    return _run("eg", eg_step, idx, cfg)


def run_nmg(idx: UpstreamIndex, cfg: EGConfig) -> RunResult:
    return _run("nmg", nmg_step, idx, cfg)


# --------------------------------------------------------------------------
# exhaustive oracle


@dataclass
class OracleEntry:
    objectives: ObjectiveVector
    plan: PlacementPlan
    count: int


def brute_force_pareto(idx: UpstreamIndex, S: int, cap: int = 2_000_000) -> list[OracleEntry]:
    """Exact Pareto front over all ``S``-sensor plans.

    Returns one entry per non-dominated objective vector with its
    lexicographically first plan and the number of plans attaining it.
    """
    total = math.comb(idx.n, S)
    if total > cap:
        raise CombinatorialCapExceeded(f"C({idx.n}, {S}) = {total} exceeds cap {cap}")
    groups: dict[ObjectiveVector, list] = {}
    for plan in combinations(range(idx.n), S):
        obj = evaluate_plan(plan, idx)
        g = groups.get(obj)
        if g is None:
            groups[obj] = [plan, 1]
        else:
            g[1] += 1
    vectors = list(groups)
    fa = non_dominated_sort(vectors)
    entries = [OracleEntry(vectors[i], groups[vectors[i]][0], groups[vectors[i]][1]) for i in fa.fronts[0]]
    return sorted(entries, key=lambda e: (-e.objectives.coverage, e.objectives.search_cost))
