"""Complete scenarios: the random desk profile and a well-separated grid."""

import math
from dataclasses import dataclass

import numpy as np

from ..metrics.tracks import Track
from .config import RegionConfig, ScenarioConfig
from .measurements import ScanData, generate_measurements
from .truth import generate_truth


@dataclass(frozen=True)
class Scenario:
    config: ScenarioConfig
    truth: list[Track]
    scans: list[ScanData]


def simulate(cfg: ScenarioConfig) -> Scenario:
    """Truth and measurements for a configuration."""
    truth = generate_truth(cfg)
    return Scenario(cfg, truth, generate_measurements(truth, cfg))


def separated_scenario(
    n_objects: int,
    spacing: float = 200.0,
    duration: int = 20,
    speed: float = 1.0,
    detection_prob: float = 0.95,
    clutter_rate: float = 0.0,
    rng_seed: int = 0,
) -> Scenario:
    """Objects on a square grid moving in parallel for the whole scenario.

    Objects stay `spacing` metres apart, so with a small gate every object
    forms its own label group. Useful for scaling runs and for comparing the
    partitioned filter against a monolithic one.
    """
    if n_objects < 1:
        raise ValueError(f"n_objects must be >= 1, got {n_objects}")
    cols = math.ceil(math.sqrt(n_objects))
    rows = math.ceil(n_objects / cols)
    region = RegionConfig(
        x_min=0.0,
        x_max=cols * spacing + speed * duration,
        y_min=0.0,
        y_max=rows * spacing,
    )
    cfg = ScenarioConfig(
        duration=duration,
        region=region,
        birth_windows=[],
        speed_range=(speed, speed),
        detection_prob=detection_prob,
        clutter_rate=clutter_rate,
        rng_seed=rng_seed,
    )
    times = np.arange(1, duration + 1, dtype=np.int64)
    offsets = (times - 1).astype(np.float64) * cfg.scan_interval * speed
    truth = []
    for i in range(n_objects):
        row, col = divmod(i, cols)
        x = (col + 0.5) * spacing + offsets
        y = np.full(duration, (row + 0.5) * spacing)
        states = np.column_stack(
            [x, y, np.full(duration, speed), np.zeros(duration)]
        )
        truth.append(Track(f"truth-{i}", times, states))
    return Scenario(cfg, truth, generate_measurements(truth, cfg))
