"""Scenario simulator: ground truth, detections and clutter."""

from .config import BirthWindow, RegionConfig, ScenarioConfig
from .measurements import ScanData, generate_measurements
from .scenarios import Scenario, separated_scenario, simulate
from .truth import birth_mixture, expected_cardinality, generate_truth

__all__ = [
    "BirthWindow",
    "RegionConfig",
    "ScanData",
    "Scenario",
    "ScenarioConfig",
    "birth_mixture",
    "expected_cardinality",
    "generate_measurements",
    "generate_truth",
    "separated_scenario",
    "simulate",
]
