"""Run configuration loading and validation."""

from .loader import find_key_line, load_run_config
from .run import THREADS_ENV, RunConfig, TrackerSettings, resolve_threads

__all__ = [
    "THREADS_ENV",
    "RunConfig",
    "TrackerSettings",
    "find_key_line",
    "load_run_config",
    "resolve_threads",
]
