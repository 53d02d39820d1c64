"""HV and wall-time comparison of NMG and EG(x) on synthetic networks.

For every network size and seed a fresh network is generated, each algorithm
runs on it, and hypervolumes are computed under bounds taken jointly over all
fronts that finished on that network. Cells are averaged over seeds. A cell
whose run exceeds the time budget is reported as ``**``; once NMG blows the
budget at some size it is not attempted on larger ones.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np

from .network import build_upstream_index
from .pareto import NormalizationBounds, front_hypervolume
from .search import EGConfig, run_eg, run_nmg
from .synthgen import DEFAULT_DISTRIBUTION, BranchingDistribution, SynthConfig, generate_intree

log = logging.getLogger(__name__)

OVER_BUDGET = "**"


@dataclass
class CellRun:
    size: int
    seed: int
    label: str
    wall_time: float
    hv: float | None
    n_solutions: int
    over_budget: bool
    bounds: dict | None = None


@dataclass
class CompareReport:
    sizes: list[int]
    labels: list[str]
    runs: list[CellRun] = field(default_factory=list)

    def cell(self, size: int, label: str, what: str):
        runs = [r for r in self.runs if r.size == size and r.label == label]
        if not runs or any(r.over_budget for r in runs):
            return None
        vals = [r.hv if what == "hv" else r.wall_time for r in runs]
        return float(np.mean(vals))

    def table(self, what: str) -> list[list[str]]:
        fmt = "{:.3f}" if what == "hv" else "{:.2f}"
        rows = [["size"] + self.labels]
        for size in self.sizes:
            row = [str(size)]
            for label in self.labels:
                v = self.cell(size, label, what)
                row.append(OVER_BUDGET if v is None else fmt.format(v))
            rows.append(row)
        return rows

    def table_csv(self, what: str) -> str:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(self.table(what))
        return buf.getvalue()

    def table_text(self, what: str) -> str:
        rows = self.table(what)
        widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)


def compare(sizes, xs, seeds, *, include_nmg: bool = True, N: int = 20, S: int = 20,
            time_budget: float | None = 600.0,
            distribution: BranchingDistribution = DEFAULT_DISTRIBUTION) -> CompareReport:
    labels = (["NMG"] if include_nmg else []) + [f"EG({x})" for x in xs]
    report = CompareReport(list(sizes), labels)
    nmg_dead = False
    for size in sizes:
        for seed in seeds:
            idx = build_upstream_index(generate_intree(SynthConfig(n=size, seed=seed, distribution=distribution)))
            results = {}
            if include_nmg:
                if nmg_dead:
                    results["NMG"] = None
                else:
                    results["NMG"] = run_nmg(idx, EGConfig(N=N, S=S, seed=seed, time_budget=time_budget))
            for x in xs:
                results[f"EG({x})"] = run_eg(idx, EGConfig(N=N, S=S, x=x, seed=seed, time_budget=time_budget))
            done = {k: r for k, r in results.items() if r is not None and r.stop_reason != "time_budget"}
            bounds = NormalizationBounds.from_points(*[r.objectives for r in done.values()]) if done else None
            for label, r in results.items():
                if r is None or label not in done:
                    report.runs.append(CellRun(size, seed, label, r.wall_time if r else float("nan"),
                                               None, 0, True))
                    continue
                hv = front_hypervolume(r.objectives, bounds)
                report.runs.append(CellRun(size, seed, label, r.wall_time, hv, len(r.solutions), False,
                                           bounds.as_dict()))
                log.info("size=%d seed=%d %s hv=%.3f t=%.2fs", size, seed, label, hv, r.wall_time)
            if include_nmg and "NMG" not in done:
                nmg_dead = True
    return report
