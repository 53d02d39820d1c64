"""Multi-objective sensor placement on directed sewer networks."""

__version__ = "0.1.0"

from .network import (
    InvalidNetworkError,
    NetworkFormatError,
    SewerNetwork,
    UpstreamIndex,
    build_upstream_index,
    is_upstream,
    load_network_dir,
    parse_network,
    validate_network,
    write_network_dir,
)
from .objectives import (
    ObjectiveVector,
    assign_entry_sets,
    coverage,
    entry_set_sizes,
    evaluate_plan,
    expected_search_cost,
    is_feasible,
    make_plan,
)
from .pareto import (
    NormalizationBounds,
    crowding_distance,
    dominates,
    hypervolume_2d,
    non_dominated_sort,
    normalize_points,
)
from .search import EGConfig, RunResult, brute_force_pareto, run_eg, run_nmg
from .synthgen import BranchingDistribution, SynthConfig, fit_branching_distribution, generate_intree
