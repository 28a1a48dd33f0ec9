"""Label partitioning by connected components of overlapping boxes."""

import logging
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import chain

import numpy as np
from rtree import index
from scipy.cluster.vq import kmeans2

from ..core.types import Label
from .boxes import BoundingBox, rescale_box
from .config import PartitionConfig
from .union_find import UnionFind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabelPartition:
    """Disjoint label groups and the gate probability that produced them."""

    groups: tuple[frozenset[Label], ...]
    gate_prob_used: float

    def __post_init__(self) -> None:
        groups = tuple(frozenset(group) for group in self.groups)
        seen: set[Label] = set()
        for group in groups:
            if seen & group:
                raise ValueError("partition groups must be pairwise disjoint")
            seen |= group
        object.__setattr__(self, "groups", groups)

    @property
    def labels(self) -> frozenset[Label]:
        return frozenset(chain.from_iterable(self.groups))

    @property
    def sizes(self) -> list[int]:
        return [len(group) for group in self.groups]

    def group_of(self) -> dict[Label, int]:
        """Map each label to the index of its group."""
        return {label: n for n, group in enumerate(self.groups) for label in group}

    def __len__(self) -> int:
        return len(self.groups)


def build_index(boxes: Sequence[BoundingBox]) -> index.Index:
    """Bulk-loaded R-tree whose ids are positions in `boxes`."""
    properties = index.Property()
    properties.dimension = boxes[0].dim
    stream = ((i, box.coordinates(), None) for i, box in enumerate(boxes))
    return index.Index(stream, properties=properties)


def overlapping_pairs(boxes: Sequence[BoundingBox]) -> list[tuple[int, int]]:
    """Index pairs (i < j) of boxes that intersect, found with an R-tree."""
    if len(boxes) < 2:
        return []
    tree = build_index(boxes)
    pairs = []
    for i, box in enumerate(boxes):
        for j in tree.intersection(box.coordinates()):
            if j > i and box.overlaps(boxes[j]):
                pairs.append((i, int(j)))
    return pairs


def overlap_components(boxes: Sequence[BoundingBox]) -> list[list[int]]:
    """Connected components of the box-overlap graph, as index lists."""
    forest = UnionFind(len(boxes))
    for i, j in overlapping_pairs(boxes):
        forest.union(i, j)
    return forest.groups()


def _chunk(members: list[int], cap: int) -> list[list[int]]:
    return [members[i : i + cap] for i in range(0, len(members), cap)]


def split_group(
    members: list[int], boxes: Sequence[BoundingBox], cap: int
) -> list[list[int]]:
    """Split an oversized group with k-means on box centres.

    Uses ceil(size / cap) clusters seeded from members evenly spaced in label
    order, and splits again any cluster that is still too large. Falls back to
    fixed-size chunks in label order when k-means makes no progress.
    """
    if len(members) <= cap:
        return [members]
    ordered = sorted(members, key=lambda i: boxes[i].label)
    k = math.ceil(len(ordered) / cap)
    centers = np.array([boxes[i].center for i in ordered])
    seeds = centers[np.round(np.linspace(0, len(ordered) - 1, k)).astype(int)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, assignment = kmeans2(centers, seeds, minit="matrix")
    clusters = [
        [ordered[n] for n in np.flatnonzero(assignment == c)] for c in range(k)
    ]
    clusters = [cluster for cluster in clusters if cluster]
    if len(clusters) == 1:
        return _chunk(ordered, cap)
    result = []
    for cluster in clusters:
        result.extend(split_group(cluster, boxes, cap))
    return result


def build_partition(
    boxes: Sequence[BoundingBox], cfg: PartitionConfig
) -> LabelPartition:
    """Group labels whose boxes overlap, keeping every group within the size cap.

    Boxes are assumed to be projected at `cfg.initial_gate_prob`. While a
    connected component exceeds `cfg.max_group_size` the gate probability is
    multiplied by `cfg.backoff_factor` and all boxes are shrunk accordingly.
    Once the backoff steps are exhausted, oversized groups are split with
    k-means on their box centres.

    Args:
        boxes: One box per label
        cfg: Size cap and backoff schedule

    Returns:
        Partition with groups ordered by their smallest label
    """
    labels = [box.label for box in boxes]
    if len(set(labels)) != len(labels):
        raise ValueError("boxes must have unique labels")

    cap = cfg.max_group_size
    gate_prob = cfg.initial_gate_prob
    current = list(boxes)
    components = overlap_components(current)
    for step in range(1, cfg.max_backoff_steps + 1):
        if all(len(members) <= cap for members in components):
            break
        new_gate_prob = cfg.initial_gate_prob * cfg.backoff_factor**step
        logger.info(
            "Largest group has %d labels (cap %d), lowering gate probability to %.4g",
            max(len(members) for members in components),
            cap,
            new_gate_prob,
        )
        current = [rescale_box(b, cfg.initial_gate_prob, new_gate_prob) for b in boxes]
        gate_prob = new_gate_prob
        components = overlap_components(current)

    groups: list[list[int]] = []
    for members in components:
        if len(members) > cap:
            logger.warning(
                "Group of %d labels still exceeds cap %d at gate probability %.4g, "
                "splitting with k-means",
                len(members),
                cap,
                gate_prob,
            )
            groups.extend(split_group(members, current, cap))
        else:
            groups.append(members)

    label_groups = sorted(
        (frozenset(labels[i] for i in members) for members in groups), key=min
    )
    return LabelPartition(tuple(label_groups), gate_prob)
