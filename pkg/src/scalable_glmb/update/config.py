"""Parameters of the per-group joint update."""

from pydantic import BaseModel, ConfigDict, Field


class UpdateConfig(BaseModel):
    """Component budget, sampler length and seed for one group update.

    Instances with fewer than `exact_threshold` labels plus measurements are
    solved by exact enumeration instead of sampling.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    requested_components: int = Field(default=100, ge=1)
    gibbs_iterations: int = Field(default=1000, ge=1)
    rng_seed: int = Field(default=0, ge=0, lt=2**64)
    exact_threshold: int = Field(default=6, ge=1)
