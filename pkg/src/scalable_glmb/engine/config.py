"""Tracker configuration."""

from pydantic import BaseModel, ConfigDict, Field

from ..core.density import TruncationConfig
from ..partition.config import PartitionConfig
from ..update.config import UpdateConfig


class EngineConfig(BaseModel):
    """Everything the per-scan step needs besides the models.

    A label whose existence probability stays below `existence_threshold` for
    `termination_scans` consecutive scans is no longer reported.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    update: UpdateConfig = Field(default_factory=UpdateConfig)
    partition: PartitionConfig = Field(default_factory=PartitionConfig)
    truncation: TruncationConfig = Field(default_factory=TruncationConfig)
    existence_threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    termination_scans: int = Field(default=3, ge=1)
    threads: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
