"""Routing of measurements to label groups."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .boxes import BoundingBox
from .grouping import LabelPartition, build_index

IntArray = NDArray[np.intp]


@dataclass(frozen=True, eq=False)
class Routing:
    """Measurement indices handed to each group, plus those no group contains."""

    group_indices: tuple[IntArray, ...]
    unassigned: IntArray


def route_measurements(
    partition: LabelPartition,
    group_boxes: Sequence[Sequence[BoundingBox]],
    measurements: ArrayLike,
) -> Routing:
    """Give each measurement to every group whose region contains it.

    A group's region is the union of its members' boxes. A measurement inside
    the regions of two groups is routed to both.

    Args:
        partition: Groups the measurements are routed to
        group_boxes: Member boxes of each group, in partition order
        measurements: (M, dim) measurement array

    Returns:
        Per-group sorted measurement indices and the unassigned indices
    """
    if len(group_boxes) != len(partition):
        raise ValueError("group_boxes must list the boxes of every partition group")
    owners = [
        (group, box) for group, boxes in enumerate(group_boxes) for box in boxes
    ]
    dim = owners[0][1].dim if owners else 2
    z = np.asarray(measurements, dtype=np.float64).reshape(-1, dim)

    hits: list[list[int]] = [[] for _ in group_boxes]
    unassigned: list[int] = []
    tree = build_index([box for _, box in owners]) if owners else None
    for j, point in enumerate(z):
        groups: set[int] = set()
        if tree is not None:
            point_box = (*point.tolist(), *point.tolist())
            for i in tree.intersection(point_box):
                group, box = owners[i]
                if box.contains(point):
                    groups.add(group)
        if not groups:
            unassigned.append(j)
        for group in groups:
            hits[group].append(j)

    return Routing(
        tuple(np.array(h, dtype=np.intp) for h in hits),
        np.array(unassigned, dtype=np.intp),
    )
