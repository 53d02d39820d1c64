"""Random in-trees of an exact size from a branching distribution.

The tree is a Galton-Watson tree conditioned on its size, so child counts
follow the given law when its mean is one and a size-tilted version otherwise.
"""

import numpy as np

from sewer_osp.network import validate_network
from sewer_osp.synthgen import (
    DEFAULT_DISTRIBUTION,
    BranchingDistribution,
    SynthConfig,
    fit_branching_distribution,
    generate_intree,
)

critical = BranchingDistribution((0.4, 0.3, 0.2, 0.1))
net = generate_intree(SynthConfig(n=5000, seed=0, distribution=critical))
print("valid:", validate_network(net).ok, "edges:", net.num_edges)
print("target law:  ", critical.probs)
print("fitted law:  ", np.round(fit_branching_distribution(net).probs, 3))

default = generate_intree(SynthConfig(n=5000, seed=0))
print(f"default law mean {DEFAULT_DISTRIBUTION.mean:.2f}; fitted from a tree:",
      np.round(fit_branching_distribution(default).probs, 3))
