"""The run configuration: every module's parameters plus seed and threads."""

import os
from pathlib import Path
from typing import Self, TypeVar

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.density import TruncationConfig
from ..core.errors import ConfigError
from ..core.hashing import derive_seed
from ..engine.config import EngineConfig
from ..metrics.config import MetricConfig, WindowSpec
from ..models.config import ModelConfig, ModelSet
from ..partition.config import PartitionConfig
from ..simulation.config import ScenarioConfig
from ..update.config import UpdateConfig

THREADS_ENV = "GLMB_THREADS"

M = TypeVar("M", bound=BaseModel)


def _override(model: M, **values: object) -> M:
    """Validated copy of a section with every non-None value replaced."""
    changes = {key: value for key, value in values.items() if value is not None}
    return model.model_validate({**model.model_dump(), **changes})


class TrackerSettings(BaseModel):
    """Track reporting rule: drop labels that stay unlikely for a while."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    existence_threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    termination_scans: int = Field(default=3, ge=1)


class RunConfig(BaseModel):
    """Everything a simulate, track or evaluate run reads.

    All randomness derives from `seed`: the scenario, the measurement stream
    and every group update get their own stable sub-seed, so the scenario
    section must not set its own `rng_seed`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(default=0, ge=0, lt=2**64)
    threads: int = Field(default=1, ge=0)
    output_dir: Path = Path("out")
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    models: ModelConfig = Field(default_factory=ModelConfig)
    update: UpdateConfig = Field(default_factory=UpdateConfig)
    partition: PartitionConfig = Field(default_factory=PartitionConfig)
    truncation: TruncationConfig = Field(default_factory=TruncationConfig)
    tracker: TrackerSettings = Field(default_factory=TrackerSettings)
    metric: MetricConfig = Field(default_factory=MetricConfig)
    window: WindowSpec = Field(default_factory=WindowSpec)

    @model_validator(mode="after")
    def check_single_seed(self) -> Self:
        if "rng_seed" in self.scenario.model_fields_set:
            raise ValueError("set the top-level seed instead of scenario.rng_seed")
        if "rng_seed" in self.update.model_fields_set:
            raise ValueError("set the top-level seed instead of update.rng_seed")
        return self

    def with_seed(self, seed: int | None) -> "RunConfig":
        """Copy with the seed replaced, or self when seed is None."""
        if seed is None:
            return self
        if not 0 <= seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        return self.model_copy(update={"seed": seed})

    def scenario_config(self) -> ScenarioConfig:
        return self.scenario.model_copy(
            update={"rng_seed": derive_seed(self.seed, "scenario")}
        )

    def model_set(self) -> ModelSet:
        return ModelSet.from_config(self.models, self.scenario.region.to_region())

    def engine_config(self, threads: int) -> EngineConfig:
        return EngineConfig(
            update=self.update,
            partition=self.partition,
            truncation=self.truncation,
            existence_threshold=self.tracker.existence_threshold,
            termination_scans=self.tracker.termination_scans,
            threads=threads,
            seed=derive_seed(self.seed, "tracker"),
        )

    def metric_config(
        self, cutoff: float | None = None, order: float | None = None
    ) -> MetricConfig:
        """The metric section with command-line overrides applied."""
        return _override(self.metric, cutoff=cutoff, order=order)

    def window_spec(
        self, length: int | None = None, stride: int | None = None
    ) -> WindowSpec:
        return _override(self.window, length=length, stride=stride)


def resolve_threads(flag: int | None, configured: int) -> int:
    """Worker count from the flag, else GLMB_THREADS, else the config.

    Zero means one worker per CPU.

    Raises:
        ConfigError: If GLMB_THREADS is not a non-negative integer
    """
    if flag is not None:
        threads = flag
    elif (env := os.getenv(THREADS_ENV)) is not None:
        try:
            threads = int(env)
        except ValueError as e:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from e
    else:
        threads = configured
    if threads < 0:
        raise ConfigError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        return os.cpu_count() or 1
    return threads
