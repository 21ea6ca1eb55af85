"""Shortest paths in graphs whose edges carry doubly stochastic matrices.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from matpath._core import (
    BuilderConfig,
    ConvergenceError,
    DistanceTable,
    InfeasibleError,
    MatrixGraph,
    MorphSequence,
    Path,
    RetrievalEval,
    Shape,
    SolveResult,
    ValidationError,
    all_pairs,
    brute_force_oracle,
    build_graph,
    builtin_descriptor,
    cluster_distance_stats,
    default_placements,
    evaluate_retrieval,
    fixed_k_path,
    intermediate_shapes,
    load_distance_table,
    load_graph,
    morph,
    nearest_neighbors,
    random_graph,
    random_scalar_graph,
    read_feature_csv,
    read_labels_csv,
    read_mesh,
    save_distance_table,
    save_graph,
    solve_from,
    total_entropy,
    write_obj,
)

__all__ = [
    "BuilderConfig",
    "ConvergenceError",
    "DistanceTable",
    "InfeasibleError",
    "MatrixGraph",
    "MorphSequence",
    "Path",
    "RetrievalEval",
    "Shape",
    "SolveResult",
    "ValidationError",
    "all_pairs",
    "brute_force_oracle",
    "build_graph",
    "builtin_descriptor",
    "cluster_distance_stats",
    "default_placements",
    "evaluate_retrieval",
    "fixed_k_path",
    "intermediate_shapes",
    "load_distance_table",
    "load_graph",
    "morph",
    "nearest_neighbors",
    "random_graph",
    "random_scalar_graph",
    "read_feature_csv",
    "read_labels_csv",
    "read_mesh",
    "save_distance_table",
    "save_graph",
    "solve_from",
    "total_entropy",
    "write_obj",
]
