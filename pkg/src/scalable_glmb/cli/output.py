"""Output formatting for run summaries and benchmark results."""

import json
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from typing import Literal

from ..storage.models import BenchmarkRun

OutputFormat = Literal["table", "json", "csv"]


@dataclass(frozen=True)
class ReportSummary:
    """Headline numbers of a tracking run."""

    scans: int
    true_tracks: int
    estimated_tracks: int
    mean_true_cardinality: float
    mean_estimated_cardinality: float
    final_ospa2: float | None
    mean_ospa2: float | None
    mean_scan_seconds: float | None
    max_group_size: int | None


def format_summary(summary: ReportSummary, format_type: OutputFormat = "table") -> str:
    """Format a run summary.

    Args:
        summary: Summary to print
        format_type: Output format (table, json, or csv)

    Returns:
        Formatted string output
    """
    if format_type == "json":
        return json.dumps(asdict(summary), indent=2)
    fields = asdict(summary)
    if format_type == "csv":
        header = ",".join(fields)
        values = ",".join("" if v is None else _number(v) for v in fields.values())
        return f"{header}\n{values}"

    lines = ["\nTracking summary", "=" * 44]
    for name, value in fields.items():
        shown = "n/a" if value is None else _number(value)
        lines.append(f"{name.replace('_', ' '):<30} {shown:>13}")
    lines.append("-" * 44)
    return "\n".join(lines)


def _number(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def format_benchmark(
    runs: Sequence[BenchmarkRun], format_type: OutputFormat = "table"
) -> str:
    """Format benchmark runs, one row per object count."""
    if format_type == "json":
        data = [
            {
                "label": r.label,
                "n_objects": r.n_objects,
                "scans": r.scans,
                "threads": r.threads,
                "clutter_rate": r.clutter_rate,
                "median_scan_seconds": r.median_scan_seconds,
                "total_seconds": r.total_seconds,
                "peak_group_size": r.peak_group_size,
                "peak_group_count": r.peak_group_count,
            }
            for r in runs
        ]
        return json.dumps(data, indent=2)
    if format_type == "csv":
        lines = ["n_objects,scans,threads,clutter_rate,median_scan_seconds,"]
        lines[0] += "total_seconds,peak_group_size,peak_group_count"
        lines.extend(
            f"{r.n_objects},{r.scans},{r.threads},{r.clutter_rate:g},"
            f"{r.median_scan_seconds:.6f},{r.total_seconds:.6f},"
            f"{r.peak_group_size},{r.peak_group_count}"
            for r in runs
        )
        return "\n".join(lines)

    if not runs:
        return "No benchmark runs."
    lines = ["\nScaling benchmark", "=" * 78]
    lines.append(
        f"{'Objects':>8} {'Scans':>6} {'Threads':>8} {'Median s/scan':>14} "
        f"{'Total s':>10} {'Max group':>10} {'Groups':>8}"
    )
    lines.append("-" * 78)
    for r in runs:
        lines.append(
            f"{r.n_objects:>8} {r.scans:>6} {r.threads:>8} "
            f"{r.median_scan_seconds:>14.4f} {r.total_seconds:>10.2f} "
            f"{r.peak_group_size:>10} {r.peak_group_count:>8}"
        )
    lines.append("-" * 78)
    return "\n".join(lines)
