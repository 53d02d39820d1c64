"""Exhaustive greedy (NMG) against sampled greedy EG(x) on a synthetic network.

NMG extends each population plan by every free manhole; EG(x) tries only x
random ones. On small instances both can be checked against brute force.
"""

from sewer_osp.network import build_upstream_index
from sewer_osp.pareto import NormalizationBounds, front_hypervolume
from sewer_osp.search import EGConfig, brute_force_pareto, run_eg, run_nmg
from sewer_osp.synthgen import SynthConfig, generate_intree

small = build_upstream_index(generate_intree(SynthConfig(n=12, seed=3)))
oracle = {tuple(e.objectives) for e in brute_force_pareto(small, 3)}
nmg_small = {tuple(o) for _, o in run_nmg(small, EGConfig(N=20, S=3)).solutions}
print(f"n=12, S=3: exhaustive front has {len(oracle)} vectors; NMG matches: {nmg_small == oracle}")

idx = build_upstream_index(generate_intree(SynthConfig(n=500, seed=0)))
runs = {"NMG": run_nmg(idx, EGConfig(N=20, S=20))}
for x in (5, 25):
    runs[f"EG({x})"] = run_eg(idx, EGConfig(N=20, S=20, x=x, seed=0))

bounds = NormalizationBounds.from_points(*[r.objectives for r in runs.values()])
for name, r in runs.items():
    hv = front_hypervolume(r.objectives, bounds)
    print(f"{name:7s} HV={hv:.3f} time={r.wall_time:.2f}s evaluations={r.evaluations} "
          f"iterations={r.iterations} stop={r.stop_reason}")

plan, obj = runs["EG(25)"].max_coverage_solution()
print(f"EG(25) best coverage {obj.coverage} at cost {obj.search_cost:.3f} with {len(plan)} sensors")
