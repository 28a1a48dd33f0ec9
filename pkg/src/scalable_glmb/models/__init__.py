"""Standard multi-object model pieces."""

from .birth import (
    BirthCandidate,
    BirthMode,
    BirthModel,
    adaptive_births,
    births_for_scan,
    static_births,
)
from .config import ModelConfig, ModelSet
from .motion import MotionModel, predict_density
from .sensor import ClutterIntensity, Region, SensorModel, measurement_likelihood

__all__ = [
    "BirthCandidate",
    "BirthMode",
    "BirthModel",
    "ClutterIntensity",
    "ModelConfig",
    "ModelSet",
    "MotionModel",
    "Region",
    "SensorModel",
    "adaptive_births",
    "births_for_scan",
    "measurement_likelihood",
    "predict_density",
    "static_births",
]
