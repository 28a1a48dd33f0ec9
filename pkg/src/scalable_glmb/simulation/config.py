"""Scenario parameters for the truth and measurement simulator."""

from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..models.sensor import Region


class RegionConfig(BaseModel):
    """Surveillance rectangle in metres."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_min: float = 0.0
    x_max: float = 1600.0
    y_min: float = 0.0
    y_max: float = 900.0

    @model_validator(mode="after")
    def check_area(self) -> Self:
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("region must have positive area")
        return self

    def to_region(self) -> Region:
        return Region(self.x_min, self.x_max, self.y_min, self.y_max)


class BirthWindow(BaseModel):
    """Poisson birth rate (objects per scan) over scans [start, end)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    start: int
    end: int
    rate: float = Field(ge=0.0)

    @model_validator(mode="after")
    def check_order(self) -> Self:
        if self.end <= self.start:
            msg = f"birth window end {self.end} must exceed start {self.start}"
            raise ValueError(msg)
        return self


def _default_birth_windows() -> list[BirthWindow]:
    return [
        BirthWindow(start=1, end=21, rate=3.5),
        BirthWindow(start=21, end=51, rate=1.0),
        BirthWindow(start=51, end=71, rate=3.0),
        BirthWindow(start=71, end=201, rate=0.5),
    ]


class ScenarioConfig(BaseModel):
    """Generative model of a scenario.

    The defaults are a desk-scale profile: 200 scans over a 1.6 x 0.9 km
    region, births drawn from a 20-component Gaussian mixture, a peak of about
    150 objects and 100 clutter points per scan.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    duration: int = Field(default=200, ge=1)
    scan_interval: float = Field(default=1.0, gt=0.0)
    region: RegionConfig = Field(default_factory=RegionConfig)
    birth_windows: list[BirthWindow] = Field(default_factory=_default_birth_windows)
    birth_mixture_components: int = Field(default=20, ge=1)
    mixture_scale_matrix: list[list[float]] = Field(
        default_factory=lambda: [[1000.0, 0.0], [0.0, 1000.0]]
    )
    wishart_dof: int = Field(default=4, ge=2)
    mixture_margin: float = Field(default=100.0, ge=0.0)
    speed_range: tuple[float, float] = (1.0, 8.0)
    lifetime_range: tuple[int, int] = (80, 140)
    meas_noise_sigma: float = Field(default=0.15, ge=0.0)
    detection_prob: float = Field(default=0.9, ge=0.0, le=1.0)
    clutter_rate: float = Field(default=100.0, ge=0.0)
    rng_seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        lo, hi = self.speed_range
        if not 0.0 <= lo <= hi:
            msg = f"speed_range must be ordered and non-negative, got {lo}, {hi}"
            raise ValueError(msg)
        first, last = self.lifetime_range
        if not 1 <= first <= last:
            msg = f"lifetime_range must be ordered and >= 1, got {first}, {last}"
            raise ValueError(msg)
        scale = np.asarray(self.mixture_scale_matrix, dtype=np.float64)
        if scale.shape != (2, 2) or not np.allclose(scale, scale.T):
            raise ValueError("mixture_scale_matrix must be a symmetric 2 x 2 matrix")
        if np.min(np.linalg.eigvalsh(scale)) <= 0.0:
            raise ValueError("mixture_scale_matrix must be positive definite")
        if self.wishart_dof <= scale.shape[0] - 1:
            raise ValueError("wishart_dof must exceed the dimension minus one")
        return self

    def birth_rate(self, scan: int) -> float:
        """Total Poisson birth rate at a scan (windows may overlap)."""
        return sum(w.rate for w in self.birth_windows if w.start <= scan < w.end)
