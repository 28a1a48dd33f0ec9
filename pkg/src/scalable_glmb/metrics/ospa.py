"""OSPA between point sets and OSPA2 between track sets."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from ..core.types import FloatArray
from .config import MetricConfig
from .tracks import Track


def ospa_from_costs(costs: FloatArray, c: float, p: float) -> float:
    """OSPA value from an (m, n) matrix of cut-off distances raised to p.

    Rows and columns may come in either order; the smaller side is assigned
    into the larger one and each unassigned element of the larger side adds
    c^p before averaging over the larger cardinality.
    """
    m, n = costs.shape
    if m > n:
        costs, (m, n) = costs.T, (n, m)
    if n == 0:
        return 0.0
    total = (n - m) * c**p
    if m:
        rows, cols = linear_sum_assignment(costs)
        total += float(costs[rows, cols].sum())
    return float((total / n) ** (1.0 / p))


def point_distances(x: FloatArray, y: FloatArray) -> FloatArray:
    """Pairwise Euclidean distances between the rows of x and of y."""
    if x.shape[0] == 0 or y.shape[0] == 0:
        return np.zeros((x.shape[0], y.shape[0]))
    return np.asarray(cdist(x, y))


def ospa(x: ArrayLike, y: ArrayLike, cfg: MetricConfig) -> float:
    """OSPA distance between two finite sets of state vectors.

    Args:
        x: (m, d) array of states; d may exceed the base-distance dimension
        y: (n, d) array of states
        cfg: Cutoff, order and base-distance selection

    Returns:
        Distance in [0, cutoff]; 0 for two empty sets
    """
    x_pts = _base_points(x, cfg)
    y_pts = _base_points(y, cfg)
    c, p = cfg.cutoff, cfg.order
    costs = np.minimum(point_distances(x_pts, y_pts), c) ** p
    return ospa_from_costs(costs, c, p)


def _base_points(states: ArrayLike, cfg: MetricConfig) -> FloatArray:
    array = np.asarray(states, dtype=np.float64)
    if array.size == 0:
        return np.zeros((0, 2))
    array = np.atleast_2d(array)
    return array if cfg.full_state else array[:, :2]


def track_distance(x: Track, y: Track, c: float, full_state: bool = False) -> float:
    """Mean per-scan OSPA between two tracks over the union of their domains.

    At a scan where only one track exists the term is c; where both exist it
    is min(c, distance). Two empty tracks are at distance 0.
    """
    union = np.union1d(x.times, y.times).size
    if union == 0:
        return 0.0
    _, ix, iy = np.intersect1d(
        x.times, y.times, assume_unique=True, return_indices=True
    )
    gaps = x.points(full_state)[ix] - y.points(full_state)[iy]
    shared = np.minimum(np.sqrt(np.einsum("ij,ij->i", gaps, gaps)), c)
    return float((c * (union - ix.size) + shared.sum()) / union)


def track_distance_matrix(
    xs: Sequence[Track], ys: Sequence[Track], cfg: MetricConfig
) -> FloatArray:
    """All pairwise track distances."""
    out = np.empty((len(xs), len(ys)))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            out[i, j] = track_distance(x, y, cfg.cutoff, cfg.full_state)
    return out


def ospa2(xs: Sequence[Track], ys: Sequence[Track], cfg: MetricConfig) -> float:
    """OSPA over track sets with the track distance as base distance."""
    c, p = cfg.cutoff, cfg.order
    costs = track_distance_matrix(xs, ys, cfg) ** p
    return ospa_from_costs(costs, c, p)
