"""sprec: exact graph reconstruction from shortest-path distance queries."""

from .base import NotFittedError, ParamsMixin, check_is_fitted
from .generate import (
    BOUNDED_DEGREE_CONNECTED,
    CATERPILLAR,
    CYCLE,
    FAMILIES,
    FamilySpec,
    InfeasibleSpecError,
    KTREE,
    RANDOM_TREE,
    RING_OF_CLIQUES,
    SplitMix64,
    generate,
    is_chordal,
    perfect_elimination_ordering,
    verify_family_invariants,
)
from .graph import (
    EdgeListParseError,
    Graph,
    GraphBuilder,
    UNREACHABLE,
    bfs_distances,
    components_masked,
    graphs_equal,
    is_connected,
    max_degree,
    neighbors_of_set,
    read_edge_list,
    write_edge_list,
)
from .layering import (
    Layering,
    LayeringInvariantError,
    LayeringTree,
    Part,
    PartialTreeError,
    anc_by_connectivity,
    build_layering,
    build_layering_tree,
    centroid,
    comp_vertices,
    extend_partial_tree,
    layering_from_depths,
    tree_length,
)
from .oracle import DistanceOracle, QueryLedger, QueryPhase
from .reconstruct import (
    BudgetExceeded,
    GraphReconstructor,
    InvariantViolation,
    KnownPrefix,
    LayerTrace,
    NaiveReconstructor,
    ReconstructionConfig,
    ReconstructionError,
    ReconstructionResult,
    extend_one_layer,
    find_ancestor_part,
    reconstruct,
    reconstruct_naive,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDED_DEGREE_CONNECTED",
    "BudgetExceeded",
    "CATERPILLAR",
    "CYCLE",
    "DistanceOracle",
    "EdgeListParseError",
    "FAMILIES",
    "FamilySpec",
    "Graph",
    "GraphBuilder",
    "GraphReconstructor",
    "InfeasibleSpecError",
    "InvariantViolation",
    "KTREE",
    "KnownPrefix",
    "Layering",
    "LayeringInvariantError",
    "LayeringTree",
    "LayerTrace",
    "NaiveReconstructor",
    "NotFittedError",
    "ParamsMixin",
    "Part",
    "PartialTreeError",
    "QueryLedger",
    "QueryPhase",
    "RANDOM_TREE",
    "RING_OF_CLIQUES",
    "ReconstructionConfig",
    "ReconstructionError",
    "ReconstructionResult",
    "SplitMix64",
    "UNREACHABLE",
    "anc_by_connectivity",
    "bfs_distances",
    "build_layering",
    "build_layering_tree",
    "centroid",
    "check_is_fitted",
    "comp_vertices",
    "components_masked",
    "extend_one_layer",
    "extend_partial_tree",
    "find_ancestor_part",
    "generate",
    "graphs_equal",
    "is_chordal",
    "is_connected",
    "layering_from_depths",
    "max_degree",
    "neighbors_of_set",
    "perfect_elimination_ordering",
    "read_edge_list",
    "reconstruct",
    "reconstruct_naive",
    "tree_length",
    "verify_family_invariants",
    "write_edge_list",
]
