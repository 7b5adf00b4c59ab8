"""Combinatorial lifting obstructions for balanced weighted integral graphs."""

__version__ = "0.1.0"

from .graph import (
    AbstractGraph,
    BalanceVerdict,
    Edge,
    EmbeddedGraph,
    Leaf,
    Subgraph,
    Vertex,
    check_balanced,
    first_betti,
    is_indecomposable_vertex,
    level_preimage,
    metric_distance,
    structure_checks,
    subdivide,
    total_genus,
    whole_graph,
)
from .divisor import (
    Divisor,
    PLFunction,
    canonical_divisor,
    in_linear_system,
    laplacian,
    tropical_homomorphism_check,
    tropical_triple_check,
)

__all__ = [
    "AbstractGraph",
    "BalanceVerdict",
    "Divisor",
    "Edge",
    "EmbeddedGraph",
    "Leaf",
    "PLFunction",
    "Subgraph",
    "Vertex",
    "canonical_divisor",
    "check_balanced",
    "first_betti",
    "in_linear_system",
    "is_indecomposable_vertex",
    "laplacian",
    "level_preimage",
    "metric_distance",
    "structure_checks",
    "subdivide",
    "total_genus",
    "tropical_homomorphism_check",
    "tropical_triple_check",
    "whole_graph",
]
