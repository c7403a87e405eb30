"""Graph feature/structure denoising.

Framelet transforms on graphs, the double-term ADMM denoiser, its three
ablation solvers, and the seeded perturbation harness. All heavy lifting
happens in the C++ extension; this package re-exports it.
"""

from gdn._core import (  # noqa: F401
    GdnError,
    Graph,
    FrameletSystem,
    LaplacianKind,
    LevelSchedule,
    batch_threshold,
    build_framelet_system,
    build_graph,
    dirichlet_energy,
    edge_admm_solve,
    estimate_lambda_max,
    exact_framelet_decompose,
    exact_framelet_reconstruct,
    framelet_decompose,
    framelet_reconstruct,
    graph_norm,
    l2_smoother,
    laplacian,
    node_admm_solve,
    perturb_edges,
    perturb_features,
    piecewise_signal,
    read_edge_list,
    read_matrix,
    recovery_metrics,
    sbm_generate,
    soft_threshold,
    soft_threshold_rows,
    solve,
    tv_smooth,
    write_edge_list,
    write_matrix,
)

__all__ = [
    "GdnError",
    "Graph",
    "FrameletSystem",
    "LaplacianKind",
    "LevelSchedule",
    "batch_threshold",
    "build_framelet_system",
    "build_graph",
    "dirichlet_energy",
    "edge_admm_solve",
    "estimate_lambda_max",
    "exact_framelet_decompose",
    "exact_framelet_reconstruct",
    "framelet_decompose",
    "framelet_reconstruct",
    "graph_norm",
    "l2_smoother",
    "laplacian",
    "node_admm_solve",
    "perturb_edges",
    "perturb_features",
    "piecewise_signal",
    "read_edge_list",
    "read_matrix",
    "recovery_metrics",
    "sbm_generate",
    "soft_threshold",
    "soft_threshold_rows",
    "solve",
    "tv_smooth",
    "write_edge_list",
    "write_matrix",
]
