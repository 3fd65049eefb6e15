"""Domain adaptation over pre-extracted deep features.

The package bundles the dataset/file layer, kernel and MMD machinery, the
closed-form alignment classifier with pseudo-label refinement, the subspace
geometry it is benchmarked against, and the suite harness behind the ``da``
command-line tool.
"""

from .alignment import (
    AlignmentConfig,
    GraphLaplacian,
    IterationStats,
    TrainedAligner,
    build_laplacian,
    evaluate,
    fit,
    one_nn_labels,
    predict,
    solve_beta,
)
from .datasets import (
    DaTask,
    FeatureDataset,
    load_binary,
    load_csv,
    make_task,
    normalize,
    save_binary,
    save_csv,
)
from .kernels import KernelSpec, gram, median_bandwidth, resolve_kernel
from .manifold import (
    GfkKernel,
    PrincipalAngles,
    Subspace,
    demo_emit,
    gfk_kernel,
    gfk_transform,
    grassmann_exp,
    grassmann_log,
    pca_subspace,
    principal_angles,
    shape_geodesic,
    sphere_geodesic,
)
from .mmd import MmdOperator, composite_mmd, conditional_mmd, estimate_mu, marginal_mmd

__version__ = "0.1.0"

__all__ = [
    "AlignmentConfig",
    "DaTask",
    "FeatureDataset",
    "GfkKernel",
    "GraphLaplacian",
    "IterationStats",
    "KernelSpec",
    "MmdOperator",
    "PrincipalAngles",
    "Subspace",
    "TrainedAligner",
    "build_laplacian",
    "composite_mmd",
    "conditional_mmd",
    "demo_emit",
    "estimate_mu",
    "evaluate",
    "fit",
    "gfk_kernel",
    "gfk_transform",
    "gram",
    "grassmann_exp",
    "grassmann_log",
    "load_binary",
    "load_csv",
    "make_task",
    "marginal_mmd",
    "median_bandwidth",
    "normalize",
    "one_nn_labels",
    "pca_subspace",
    "predict",
    "principal_angles",
    "resolve_kernel",
    "save_binary",
    "save_csv",
    "shape_geodesic",
    "solve_beta",
    "sphere_geodesic",
]
