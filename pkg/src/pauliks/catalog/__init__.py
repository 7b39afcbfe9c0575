"""Named structures, generator families, graph states, and the 600-cell."""

from .families import (KITE_VARIANTS, KiteStructure, NineBasisProof,
                       cached_kite, kite_family, kite_nine_basis_proof,
                       star_kernel, wheel, wheel_kernel, whorl, whorl_kernel)
from .golden import (KAPPA, TAU, CatalogError, GoldenNumber, RaySystem600,
                     RealRay4, cell600, cell600_rb_set)
from .graphs import (StabilizerScan, adjacency_from_edges,
                     connected_four_vertex_graphs, entanglement_partition,
                     graph_generators, graph_state_id, scan_graph_state,
                     stabilizer_words)
from .structures import (catalog_names, four_qubit_critical_ids, line_spreads,
                         named, pauli60, two_qubit_lines)

__all__ = [
    "KITE_VARIANTS", "KiteStructure", "NineBasisProof", "cached_kite",
    "kite_family", "kite_nine_basis_proof", "star_kernel", "wheel",
    "wheel_kernel", "whorl", "whorl_kernel",
    "KAPPA", "TAU", "CatalogError", "GoldenNumber", "RaySystem600",
    "RealRay4", "cell600", "cell600_rb_set",
    "StabilizerScan", "adjacency_from_edges", "connected_four_vertex_graphs",
    "entanglement_partition", "graph_generators", "graph_state_id",
    "scan_graph_state", "stabilizer_words",
    "catalog_names", "four_qubit_critical_ids", "line_spreads", "named",
    "pauli60", "two_qubit_lines",
]
