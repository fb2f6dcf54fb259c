"""Network topology statistics for typed version-control Merkle DAGs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CorruptFileError,
    DagTopoError,
    DomainError,
    IngestionError,
    UnsupportedFormatError,
    UnsupportedVersionError,
    ValidationError,
)
from .graph_core import (  # noqa: E402
    EdgeTypeRule,
    NodeType,
    TypedGraph,
    build,
    default_rules,
    from_arrays,
    transpose_view,
    undirected_neighbors,
)
from .io_formats import load, parse_dataset, save  # noqa: E402
from .layers import LAYERS, LayerSpec, cumulative_sequence, induce  # noqa: E402
from .metrics_cc import connected_components, origin_weighted_size_distribution  # noqa: E402
from .metrics_degree import degrees, local_clustering  # noqa: E402
from .metrics_paths import root_leaf_path_lengths  # noqa: E402
from .stats_fit import Histogram, alpha_sweep, ccdf, decade_amplitude, emit, ks_distance  # noqa: E402

__all__ = [
    "CorruptFileError",
    "DagTopoError",
    "DomainError",
    "EdgeTypeRule",
    "Histogram",
    "IngestionError",
    "LAYERS",
    "LayerSpec",
    "NodeType",
    "TypedGraph",
    "UnsupportedFormatError",
    "UnsupportedVersionError",
    "ValidationError",
    "alpha_sweep",
    "build",
    "ccdf",
    "connected_components",
    "cumulative_sequence",
    "decade_amplitude",
    "default_rules",
    "degrees",
    "emit",
    "from_arrays",
    "induce",
    "ks_distance",
    "load",
    "local_clustering",
    "origin_weighted_size_distribution",
    "parse_dataset",
    "root_leaf_path_lengths",
    "save",
    "transpose_view",
    "undirected_neighbors",
]
