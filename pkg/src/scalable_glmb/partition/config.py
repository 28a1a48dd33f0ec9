"""Partitioning parameters."""

from pydantic import BaseModel, ConfigDict, Field


class PartitionConfig(BaseModel):
    """Group-size cap and gate-probability backoff schedule.

    When a group exceeds `max_group_size`, the gate probability is multiplied
    by `backoff_factor` and the boxes are recomputed, at most
    `max_backoff_steps` times.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_group_size: int = Field(default=20, ge=1)
    initial_gate_prob: float = Field(default=0.99, gt=0.0, lt=1.0)
    backoff_factor: float = Field(default=0.9, gt=0.0, lt=1.0)
    max_backoff_steps: int = Field(default=5, ge=1)
