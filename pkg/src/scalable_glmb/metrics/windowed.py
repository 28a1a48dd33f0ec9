"""Time series of OSPA2 over sliding windows, and per-scan OSPA."""

from collections.abc import Sequence
from concurrent.futures import Executor
from enum import StrEnum

from .config import MetricConfig, WindowSpec
from .ospa import ospa, ospa2
from .sparse import ospa2_sparse
from .tracks import Track, states_at


class EvaluationMethod(StrEnum):
    DENSE = "dense"
    SPARSE = "sparse"


def restrict_tracks(tracks: Sequence[Track], start: int, end: int) -> list[Track]:
    """Tracks restricted to [start, end], dropping those with nothing left."""
    restricted = (track.restrict(start, end) for track in tracks)
    return [track for track in restricted if not track.is_empty]


def evaluation_times(horizon: tuple[int, int], window: WindowSpec) -> list[int]:
    start, end = horizon
    if end < start:
        raise ValueError(f"horizon must be non-empty, got {horizon}")
    return list(range(start, end + 1, window.stride))


def ospa2_at(
    xs: Sequence[Track],
    ys: Sequence[Track],
    k: int,
    cfg: MetricConfig,
    window: WindowSpec,
    method: EvaluationMethod = EvaluationMethod.DENSE,
) -> float:
    """OSPA2 of the tracks restricted to the window ending at scan k."""
    start = k - window.length + 1
    x_window = restrict_tracks(xs, start, k)
    y_window = restrict_tracks(ys, start, k)
    if method is EvaluationMethod.SPARSE:
        return ospa2_sparse(x_window, y_window, cfg)
    return ospa2(x_window, y_window, cfg)


def ospa2_windowed(
    xs: Sequence[Track],
    ys: Sequence[Track],
    cfg: MetricConfig,
    window: WindowSpec,
    horizon: tuple[int, int],
    method: EvaluationMethod = EvaluationMethod.DENSE,
    executor: Executor | None = None,
) -> list[tuple[int, float]]:
    """OSPA2 at every evaluation time of the horizon.

    At time k every track is restricted to the window {k - N + 1, ..., k};
    tracks with no state in the window are left out.

    Args:
        xs: First track set, typically the truth
        ys: Second track set, typically the estimates
        cfg: Cutoff, order and base distance
        window: Window length N and stride between evaluation times
        horizon: Closed range (first, last) of evaluation times
        method: Dense assignment or the sparse pipeline
        executor: Optional executor; windows are evaluated independently

    Returns:
        (k, value) pairs in increasing k
    """
    method = EvaluationMethod(method)
    times = evaluation_times(horizon, window)

    def evaluate(k: int) -> float:
        return ospa2_at(xs, ys, k, cfg, window, method)

    if executor is None:
        values = [evaluate(k) for k in times]
    else:
        values = list(executor.map(evaluate, times))
    return list(zip(times, values, strict=True))


def ospa_series(
    xs: Sequence[Track],
    ys: Sequence[Track],
    cfg: MetricConfig,
    horizon: tuple[int, int],
) -> list[tuple[int, float]]:
    """Traditional OSPA between the instantaneous states at every scan."""
    start, end = horizon
    series = []
    for k in range(start, end + 1):
        x_states = states_at(xs, k, cfg.full_state)
        y_states = states_at(ys, k, cfg.full_state)
        series.append((k, ospa(x_states, y_states, cfg)))
    return series
