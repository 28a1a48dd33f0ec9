"""Tracking metrics: OSPA, track distance, OSPA2 and plot data."""

from .config import MetricConfig, WindowSpec
from .ospa import ospa, ospa2, ospa_from_costs, track_distance, track_distance_matrix
from .plotdata import DensityGrid, cardinality_series, density_grid
from .sparse import assignable_pairs, ospa2_sparse, sparse_assignment
from .tracks import Track, states_at, time_range
from .windowed import (
    EvaluationMethod,
    ospa2_at,
    ospa2_windowed,
    ospa_series,
    restrict_tracks,
)

__all__ = [
    "DensityGrid",
    "EvaluationMethod",
    "MetricConfig",
    "Track",
    "WindowSpec",
    "assignable_pairs",
    "cardinality_series",
    "density_grid",
    "ospa",
    "ospa2",
    "ospa2_at",
    "ospa2_sparse",
    "ospa2_windowed",
    "ospa_from_costs",
    "ospa_series",
    "restrict_tracks",
    "sparse_assignment",
    "states_at",
    "time_range",
    "track_distance",
    "track_distance_matrix",
]
