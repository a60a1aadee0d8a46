"""Exact 2-packing numbers of triangular half-grids, grids and path token graphs."""
from .errors import EnumerationLimitExceeded, InvalidParameter, PacklabError, SizeCapExceeded
from .graphs import (
    Cell, Graph, PackingSet, WindowSpec, conflict_graph, gamma_graph, graph_distance,
    grid_graph, grid_window, is_packing, lattice_graph, path_graph, token_graph,
)
from .packing import (
    Constraint, EnumerationResult, SolveResult, constrained_max, enumerate_packings,
    rho_exact, rho_window_dp,
)
from .theory import a_closed, a_recursive, construction_A, fisher_rho, strip_construction

__version__ = "0.1.0"

__all__ = [
    "Cell", "Constraint", "EnumerationLimitExceeded", "EnumerationResult", "Graph",
    "InvalidParameter", "PackingSet", "PacklabError", "SizeCapExceeded", "SolveResult",
    "WindowSpec", "a_closed", "a_recursive", "conflict_graph", "constrained_max",
    "construction_A", "enumerate_packings", "fisher_rho", "gamma_graph", "graph_distance",
    "grid_graph", "grid_window", "is_packing", "lattice_graph", "path_graph", "rho_exact",
    "rho_window_dp", "strip_construction", "token_graph",
]
