"""Quantum search, constrained population evolution and diamond-lattice folding."""

from .search_core import (
    QuerySolution,
    SearchProblem,
    SearchState,
    apply_diffusion,
    apply_oracle,
    classical_query_counts,
    database_size_for_queries,
    grover_iterate,
    optimal_queries,
    success_probability,
    uniform_state,
)

__version__ = "0.1.0"
