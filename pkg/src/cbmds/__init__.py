"""Range-based localization of sensor networks from connectivity alone.

The package builds synthetic deployments on irregular fields, derives
hop-based distance estimates, and recovers node coordinates either with one
global multidimensional scaling pass (the map-stitching baseline) or by
solving small cluster maps and merging them rigidly. A Monte Carlo harness,
an HTTP service and a CLI sit on top of the solvers.
"""

from .alignment import (
    Transform2D,
    apply_transform,
    procrustes_rigid,
    procrustes_similarity,
    residual,
)
from .clustering import ClusterSet, extend_clusters, kmeans_clusters
from .errors import (
    CbmdsError,
    DegenerateInput,
    Disconnected,
    EmptyInput,
    IllConditioned,
    KTooLarge,
    MaskEmpty,
    MismatchedNodeSets,
    NonFinite,
    OverlapTooSmall,
    SubsetDisconnected,
    TooFewAnchors,
)
from .figures import render_figure
from .harness import (
    CheckResult,
    DemoResult,
    ExperimentConfig,
    SummaryRow,
    TopologyConfig,
    TrialResult,
    demo_trial,
    derive_seed,
    raw_csv,
    run_sweep,
    summarize,
    summary_csv,
    validate_fixtures,
)
from .localization import (
    Algorithm,
    GlobalMap,
    LocalMap,
    align_to_anchors,
    build_local_maps,
    cb_mds,
    mds_map_baseline,
    mean_normalized_error,
    merge_local_maps,
    positions_csv,
)
from .mds import RelativeMap, classical_mds
from .network import (
    DistanceMatrix,
    Network,
    average_connectivity,
    build_network,
    shortest_path_matrix,
)
from .topology import (
    Deployment,
    FieldSpec,
    Placement,
    Shape,
    cutout_rects,
    generate_deployment,
    shape_mask,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "CbmdsError",
    "CheckResult",
    "ClusterSet",
    "DegenerateInput",
    "DemoResult",
    "Deployment",
    "Disconnected",
    "DistanceMatrix",
    "EmptyInput",
    "ExperimentConfig",
    "FieldSpec",
    "GlobalMap",
    "IllConditioned",
    "KTooLarge",
    "LocalMap",
    "MaskEmpty",
    "MismatchedNodeSets",
    "Network",
    "NonFinite",
    "OverlapTooSmall",
    "Placement",
    "RelativeMap",
    "Shape",
    "SubsetDisconnected",
    "SummaryRow",
    "TooFewAnchors",
    "TopologyConfig",
    "Transform2D",
    "TrialResult",
    "align_to_anchors",
    "apply_transform",
    "average_connectivity",
    "build_local_maps",
    "build_network",
    "cb_mds",
    "classical_mds",
    "cutout_rects",
    "demo_trial",
    "derive_seed",
    "extend_clusters",
    "generate_deployment",
    "kmeans_clusters",
    "mds_map_baseline",
    "mean_normalized_error",
    "merge_local_maps",
    "positions_csv",
    "procrustes_rigid",
    "procrustes_similarity",
    "raw_csv",
    "render_figure",
    "residual",
    "run_sweep",
    "shape_mask",
    "shortest_path_matrix",
    "summarize",
    "summary_csv",
    "validate_fixtures",
]
