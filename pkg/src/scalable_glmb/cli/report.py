"""Summary and plot data of a finished run."""

from collections.abc import Sequence

import numpy as np

from ..engine.state import ScanDiagnostics
from ..metrics.plotdata import DensityGrid, cardinality_series, density_grid
from ..metrics.tracks import Track, time_range
from ..models.sensor import Region
from .output import ReportSummary


def snapshot_scans(horizon: tuple[int, int], count: int = 3) -> list[int]:
    """`count` scans spread evenly over the horizon, endpoints excluded."""
    start, end = horizon
    picks = np.linspace(start, end, count + 2)[1:-1]
    return sorted({int(round(k)) for k in picks})


def density_snapshots(
    truth: Sequence[Track],
    estimates: Sequence[Track],
    scans: Sequence[int],
    region: Region,
    cell_size: float,
) -> list[tuple[str, DensityGrid]]:
    """True and estimated density grids at each snapshot scan."""
    grids = []
    for k in scans:
        grids.append(("truth", density_grid(truth, k, region, cell_size)))
        grids.append(("estimate", density_grid(estimates, k, region, cell_size)))
    return grids


def build_summary(
    truth: Sequence[Track],
    estimates: Sequence[Track],
    diagnostics: Sequence[ScanDiagnostics] = (),
    ospa2_series: Sequence[tuple[int, float]] = (),
) -> ReportSummary:
    """Headline numbers over the scans covered by either track set.

    Raises:
        ValueError: If neither track set has any state
    """
    horizon = time_range([*truth, *estimates])
    if horizon is None:
        raise ValueError("no track has any state")
    series = cardinality_series(truth, estimates, horizon)
    values = [v for _, v in ospa2_series]
    times = [d.wall_time for d in diagnostics]
    return ReportSummary(
        scans=len(series),
        true_tracks=sum(1 for t in truth if not t.is_empty),
        estimated_tracks=sum(1 for t in estimates if not t.is_empty),
        mean_true_cardinality=float(np.mean([n for _, n, _ in series])),
        mean_estimated_cardinality=float(np.mean([n for _, _, n in series])),
        final_ospa2=values[-1] if values else None,
        mean_ospa2=float(np.mean(values)) if values else None,
        mean_scan_seconds=float(np.mean(times)) if times else None,
        max_group_size=max((d.max_group_size for d in diagnostics), default=None),
    )
