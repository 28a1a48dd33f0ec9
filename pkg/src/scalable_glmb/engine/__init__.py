"""Scan-by-scan tracker built on partitioned GLMB factors."""

from .config import EngineConfig
from .state import ScanDiagnostics, TrackerState
from .tracker import label_boxes, label_densities, run, step, thread_pool

__all__ = [
    "EngineConfig",
    "ScanDiagnostics",
    "TrackerState",
    "label_boxes",
    "label_densities",
    "run",
    "step",
    "thread_pool",
]
