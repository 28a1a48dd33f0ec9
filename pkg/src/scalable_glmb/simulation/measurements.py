"""Noisy detections and clutter for every scan of a scenario."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..core.hashing import derive_seed
from ..core.types import FloatArray
from ..metrics.tracks import Track, states_at
from .config import ScenarioConfig


@dataclass(frozen=True, eq=False)
class ScanData:
    """The unordered measurement set received at one scan."""

    scan: int
    measurements: FloatArray

    def __post_init__(self) -> None:
        z = np.asarray(self.measurements, dtype=np.float64)
        if z.size == 0:
            z = np.zeros((0, 2))
        if z.ndim != 2:
            raise ValueError(f"scan {self.scan} measurements must be an (M, d) array")
        object.__setattr__(self, "measurements", z)

    def __len__(self) -> int:
        return int(self.measurements.shape[0])


def generate_measurements(
    truth: Sequence[Track], cfg: ScenarioConfig
) -> list[ScanData]:
    """Simulate the sensor over the scenario.

    Every object alive at scan k is detected with the detection probability
    and reported at its position plus Gaussian noise; reports falling outside
    the region are lost. A Poisson number of clutter points is added uniformly
    over the region and the combined set is shuffled.

    Args:
        truth: True tracks, e.g. from generate_truth
        cfg: Scenario parameters

    Returns:
        One ScanData per scan 1..duration
    """
    rng = np.random.default_rng(derive_seed(cfg.rng_seed, "measurements"))
    region = cfg.region.to_region()
    scans = []
    for k in range(1, cfg.duration + 1):
        positions = states_at(truth, k)
        detected = rng.uniform(size=positions.shape[0]) < cfg.detection_prob
        noisy = positions[detected] + rng.normal(
            0.0, cfg.meas_noise_sigma, size=(int(detected.sum()), 2)
        )
        noisy = noisy[region.contains(noisy)] if noisy.size else noisy
        n_clutter = int(rng.poisson(cfg.clutter_rate))
        clutter = np.column_stack(
            [
                rng.uniform(region.x_min, region.x_max, size=n_clutter),
                rng.uniform(region.y_min, region.y_max, size=n_clutter),
            ]
        )
        z = np.vstack([noisy.reshape(-1, 2), clutter.reshape(-1, 2)])
        scans.append(ScanData(k, z[rng.permutation(z.shape[0])]))
    return scans
