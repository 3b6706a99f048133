"""Edge addition for maximising the smallest eigenvalue of a grounded Laplacian."""

from .estimators import (
    METHODS,
    BaselineAugmenter,
    ExhaustiveAugmenter,
    FastGreedyAugmenter,
    GreedyAugmenter,
)
from .graph import Graph, largest_connected_component, load_edge_list, write_edge_list
from .optimize import (
    RunResult,
    build_candidates,
    exhaustive_optimum,
    greedy_exact,
    greedy_fast,
    ratio_bounds,
)
from .spectral import GroundedSystem, SolverSettings, smallest_eigenpair

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "BaselineAugmenter",
    "ExhaustiveAugmenter",
    "FastGreedyAugmenter",
    "GreedyAugmenter",
    "Graph",
    "GroundedSystem",
    "RunResult",
    "SolverSettings",
    "build_candidates",
    "exhaustive_optimum",
    "greedy_exact",
    "greedy_fast",
    "largest_connected_component",
    "load_edge_list",
    "ratio_bounds",
    "smallest_eigenpair",
    "write_edge_list",
]
