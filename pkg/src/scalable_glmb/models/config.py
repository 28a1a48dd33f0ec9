"""Model parameters as loaded from the run configuration."""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .birth import BirthMode, BirthModel
from .motion import MotionModel
from .sensor import Region, SensorModel


class ModelConfig(BaseModel):
    """Motion, sensor and birth parameters.

    Survival, detection, noise and clutter defaults follow the desk-scale
    scenario; birth probability and birth velocity spread are tuning values.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scan_interval: float = Field(default=1.0, gt=0.0)
    accel_sigma: float = Field(default=0.1, ge=0.0)
    survival_prob: float = Field(default=0.999, gt=0.0, le=1.0)
    detection_prob: float = Field(default=0.9, ge=0.0, le=1.0)
    noise_sigma: float = Field(default=0.15, gt=0.0)
    clutter_rate: float = Field(default=100.0, ge=0.0)
    birth_mode: BirthMode = BirthMode.MEASUREMENT_DRIVEN
    birth_prob: float = Field(default=0.02, gt=0.0, lt=1.0)
    birth_velocity_sigma: float = Field(default=5.0, gt=0.0)


@dataclass(frozen=True)
class ModelSet:
    """The three model pieces the tracker needs at every scan."""

    motion: MotionModel
    sensor: SensorModel
    birth: BirthModel

    @classmethod
    def from_config(cls, cfg: ModelConfig, region: Region) -> "ModelSet":
        motion = MotionModel.constant_velocity(
            cfg.scan_interval, cfg.accel_sigma, cfg.survival_prob
        )
        sensor = SensorModel.position_sensor(
            cfg.noise_sigma, cfg.detection_prob, cfg.clutter_rate, region
        )
        birth = BirthModel(
            mode=cfg.birth_mode,
            adaptive_birth_prob=cfg.birth_prob,
            adaptive_velocity_cov=cfg.birth_velocity_sigma**2 * np.eye(2),
        )
        return cls(motion, sensor, birth)
