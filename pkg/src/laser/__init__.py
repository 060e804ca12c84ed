"""Locality-aware sequential graph rewiring (LASER) and its evaluation metrics."""

__version__ = "0.1.0"

from .graph import UNREACHED, Graph, parse_edge_list, to_edge_list  # noqa: E402
from .rewire import RewireConfig, laser_rewire  # noqa: E402
from .snapshots import SnapshotSequence, flatten_snapshots  # noqa: E402

__all__ = [
    "UNREACHED",
    "Graph",
    "RewireConfig",
    "SnapshotSequence",
    "flatten_snapshots",
    "laser_rewire",
    "parse_edge_list",
    "to_edge_list",
]
