"""Non-dominated sorting, crowding and hypervolume of objective vectors.

Coverage is maximised and search cost minimised. Hypervolume is measured
after mapping both objectives to [0, 1] with 0 best, against the corner (1, 1).
"""

import numpy as np

from sewer_osp.pareto import (
    NormalizationBounds,
    crowding_distance,
    front_hypervolume,
    non_dominated_sort,
)

rng = np.random.default_rng(1)
points = [(int(c), float(s)) for c, s in zip(rng.integers(1, 40, 25), rng.random(25) * 5)]

fa = non_dominated_sort(points)
for r, front in enumerate(fa.fronts[:3]):
    vecs = [points[i] for i in front]
    print(f"front {r}: {sorted(vecs, key=lambda v: -v[0])}")

first = [points[i] for i in fa.fronts[0]]
print("crowding on the first front:", np.round(crowding_distance(first), 3))

bounds = NormalizationBounds.from_points(points)
print("bounds:", bounds.as_dict())
print(f"hypervolume of first front: {front_hypervolume(first, bounds):.4f}")
print(f"hypervolume of second front: {front_hypervolume([points[i] for i in fa.fronts[1]], bounds):.4f}")
