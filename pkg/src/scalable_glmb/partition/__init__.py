"""Label-space partitioning and measurement routing."""

from .boxes import BoundingBox, gate_scale, project_box, rescale_box
from .config import PartitionConfig
from .grouping import (
    LabelPartition,
    build_partition,
    overlap_components,
    overlapping_pairs,
    split_group,
)
from .routing import Routing, route_measurements
from .union_find import UnionFind

__all__ = [
    "BoundingBox",
    "LabelPartition",
    "PartitionConfig",
    "Routing",
    "UnionFind",
    "build_partition",
    "gate_scale",
    "overlap_components",
    "overlapping_pairs",
    "project_box",
    "rescale_box",
    "route_measurements",
    "split_group",
]
