"""Plot data: cardinality curves and gridded target densities."""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core.types import FloatArray
from ..models.sensor import Region
from .tracks import Track, states_at


def cardinality_series(
    truth: Sequence[Track], estimates: Sequence[Track], horizon: tuple[int, int]
) -> list[tuple[int, int, int]]:
    """(k, true count, estimated count) for every scan of the horizon."""
    start, end = horizon
    if end < start:
        return []
    scans = np.arange(start, end + 1)
    true_counts = _counts(truth, scans)
    est_counts = _counts(estimates, scans)
    return [
        (int(k), int(t), int(e))
        for k, t, e in zip(scans, true_counts, est_counts, strict=True)
    ]


def _counts(tracks: Sequence[Track], scans: np.ndarray) -> np.ndarray:
    counts = np.zeros(scans.size, dtype=np.int64)
    for track in tracks:
        inside = track.times[(track.times >= scans[0]) & (track.times <= scans[-1])]
        np.add.at(counts, inside - scans[0], 1)
    return counts


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Object counts per cell of a regular grid at one scan."""

    scan: int
    x_edges: FloatArray
    y_edges: FloatArray
    counts: FloatArray

    def cells(self) -> list[tuple[float, float, int]]:
        """(x centre, y centre, count) for every cell, row-major in x."""
        x_mid = 0.5 * (self.x_edges[:-1] + self.x_edges[1:])
        y_mid = 0.5 * (self.y_edges[:-1] + self.y_edges[1:])
        return [
            (float(x), float(y), int(self.counts[i, j]))
            for i, x in enumerate(x_mid)
            for j, y in enumerate(y_mid)
        ]


def density_grid(
    tracks: Sequence[Track], scan: int, region: Region, cell_size: float
) -> DensityGrid:
    """2-D histogram of the track positions at a scan over the region."""
    if cell_size <= 0.0:
        raise ValueError(f"cell_size must be positive, got {cell_size}")
    nx = max(1, math.ceil(region.width / cell_size))
    ny = max(1, math.ceil(region.height / cell_size))
    x_edges = np.linspace(region.x_min, region.x_min + nx * cell_size, nx + 1)
    y_edges = np.linspace(region.y_min, region.y_min + ny * cell_size, ny + 1)
    positions = states_at(tracks, scan)
    counts, _, _ = np.histogram2d(
        positions[:, 0], positions[:, 1], bins=[x_edges, y_edges]
    )
    return DensityGrid(scan, x_edges, y_edges, counts)
