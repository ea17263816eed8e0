"""Numerical laboratory for the spectral gap of the adiabatic PageRank Hamiltonian."""

from .errors import (
    ConvergenceError,
    ConvergenceWarning,
    DenseThresholdError,
    GapbenchError,
    GraphFormatError,
)
from .graph import (
    DirectedGraph,
    ScaleFreeParams,
    dump_edge_list,
    load_edge_list,
    read_edge_list,
    scale_free_graph,
    uniform_random_graph,
    worst_case_graph,
    write_edge_list,
)
from .google import (
    GoogleOperator,
    StochasticOperator,
    google_apply,
    google_transpose_apply,
    materialize_dense,
    transition_matrix,
)
from .pagerank import PageRankResult, get_element, inner_product, power_method
from .hamiltonian import HamiltonianOperator, hamiltonian_apply, lambda_norm
from .spectra import GapProfile, SpectrumResult, gap_at, lowest_two_eigen, min_gap

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "ConvergenceWarning",
    "DenseThresholdError",
    "DirectedGraph",
    "GapProfile",
    "GapbenchError",
    "GoogleOperator",
    "GraphFormatError",
    "HamiltonianOperator",
    "PageRankResult",
    "ScaleFreeParams",
    "SpectrumResult",
    "StochasticOperator",
    "dump_edge_list",
    "gap_at",
    "get_element",
    "google_apply",
    "google_transpose_apply",
    "hamiltonian_apply",
    "inner_product",
    "lambda_norm",
    "load_edge_list",
    "lowest_two_eigen",
    "materialize_dense",
    "min_gap",
    "power_method",
    "read_edge_list",
    "scale_free_graph",
    "transition_matrix",
    "uniform_random_graph",
    "worst_case_graph",
    "write_edge_list",
]
