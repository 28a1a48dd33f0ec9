"""Scenario, track and table files, and the benchmark results database."""

from .database import (
    get_benchmark_runs,
    get_engine,
    init_db,
    save_benchmark_run,
    summarize_run,
)
from .files import (
    read_diagnostics,
    read_scans,
    read_series,
    read_table,
    read_tracks,
    write_diagnostics,
    write_scans,
    write_series,
    write_table,
    write_tracks,
)
from .models import BenchmarkRun, ScanTiming

__all__ = [
    "BenchmarkRun",
    "ScanTiming",
    "get_benchmark_runs",
    "get_engine",
    "init_db",
    "read_diagnostics",
    "read_scans",
    "read_series",
    "read_table",
    "read_tracks",
    "save_benchmark_run",
    "summarize_run",
    "write_diagnostics",
    "write_scans",
    "write_series",
    "write_table",
    "write_tracks",
]
