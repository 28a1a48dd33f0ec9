"""Metric parameters."""

from pydantic import BaseModel, ConfigDict, Field


class MetricConfig(BaseModel):
    """Cutoff c (metres) and order p of OSPA and OSPA2.

    The base distance is Euclidean on the position components unless
    `full_state` is set.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    cutoff: float = Field(default=2.0, gt=0.0)
    order: float = Field(default=1.0, ge=1.0)
    full_state: bool = False


class WindowSpec(BaseModel):
    """Sliding evaluation window: the latest `length` scans, every `stride` scans."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    length: int = Field(default=50, ge=1)
    stride: int = Field(default=1, ge=1)
