"""Tests for run configuration loading and thread resolution."""

import os
from pathlib import Path

import pytest
from pydantic import ValidationError

from scalable_glmb.config import (
    THREADS_ENV,
    RunConfig,
    find_key_line,
    load_run_config,
    resolve_threads,
)
from scalable_glmb.core.errors import ConfigError
from scalable_glmb.metrics.config import MetricConfig, WindowSpec

GOOD = """\
seed = 42
threads = 2

[scenario]
duration = 30
clutter_rate = 10.0

[[scenario.birth_windows]]
start = 1
end = 10
rate = 2.0

[partition]
max_group_size = 8

[metric]
cutoff = 5.0
"""


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_valid_config(tmp_path: Path) -> None:
    """Test that every section is read into its model."""
    cfg = load_run_config(_write(tmp_path, GOOD))
    assert cfg.seed == 42
    assert cfg.threads == 2
    assert cfg.scenario.duration == 30
    assert cfg.scenario.birth_windows[0].rate == 2.0
    assert cfg.partition.max_group_size == 8
    assert cfg.metric.cutoff == 5.0
    assert cfg.update.gibbs_iterations == 1000


def test_empty_file_gives_defaults(tmp_path: Path) -> None:
    """Test that an empty file is the default configuration."""
    assert load_run_config(_write(tmp_path, "")) == RunConfig()


def test_error_names_line_and_key(tmp_path: Path) -> None:
    """Test that a bad value is reported with its line and dotted key."""
    text = GOOD.replace("max_group_size = 8", "max_group_size = 0")
    path = _write(tmp_path, text)
    with pytest.raises(ConfigError) as excinfo:
        load_run_config(path)
    message = str(excinfo.value)
    assert message.startswith(f"{path}:14: partition.max_group_size:")


def test_unknown_key_is_rejected(tmp_path: Path) -> None:
    """Test that a misspelt key fails with its location."""
    path = _write(tmp_path, GOOD.replace("cutoff = 5.0", "cut_off = 5.0"))
    with pytest.raises(ConfigError, match=r":17: metric\.cut_off:"):
        load_run_config(path)


def test_nested_seed_is_rejected(tmp_path: Path) -> None:
    """Test that scenario.rng_seed cannot be set next to the run seed."""
    path = _write(tmp_path, "[scenario]\nrng_seed = 3\n")
    with pytest.raises(ConfigError, match="top-level seed"):
        load_run_config(path)


def test_invalid_toml(tmp_path: Path) -> None:
    """Test that a syntax error is reported as a config error."""
    with pytest.raises(ConfigError, match="invalid TOML"):
        load_run_config(_write(tmp_path, "seed = = 1"))


def test_missing_file(tmp_path: Path) -> None:
    """Test that an unreadable file is reported as a config error."""
    with pytest.raises(ConfigError, match="cannot read"):
        load_run_config(tmp_path / "absent.toml")


def test_find_key_line_prefers_deepest_match() -> None:
    """Test key lookup inside tables and arrays of tables."""
    assert find_key_line(GOOD, ("scenario", "duration")) == 5
    assert find_key_line(GOOD, ("scenario", "birth_windows", 0, "rate")) == 11
    assert find_key_line(GOOD, ("partition",)) == 13
    assert find_key_line(GOOD, ("nothing",)) is None


def test_seed_derivation() -> None:
    """Test that sub-seeds follow the run seed and with_seed validates."""
    cfg = RunConfig(seed=1)
    other = cfg.with_seed(2)
    assert other.seed == 2
    assert cfg.with_seed(None) is cfg
    assert cfg.scenario_config().rng_seed != other.scenario_config().rng_seed
    assert cfg.engine_config(1).seed != cfg.scenario_config().rng_seed
    with pytest.raises(ConfigError):
        cfg.with_seed(-1)


def test_engine_config_carries_sections() -> None:
    """Test that the engine configuration is assembled from the run sections."""
    cfg = RunConfig.model_validate(
        {"tracker": {"existence_threshold": 0.2}, "partition": {"max_group_size": 4}}
    )
    engine = cfg.engine_config(3)
    assert engine.threads == 3
    assert engine.existence_threshold == 0.2
    assert engine.partition.max_group_size == 4


def test_metric_and_window_overrides() -> None:
    """Test that flag values replace the configured metric and window."""
    cfg = RunConfig.model_validate(
        {"metric": {"cutoff": 5.0}, "window": {"length": 10}}
    )
    assert cfg.metric_config() == MetricConfig(cutoff=5.0)
    assert cfg.metric_config(order=2.0) == MetricConfig(cutoff=5.0, order=2.0)
    assert cfg.window_spec(stride=3) == WindowSpec(length=10, stride=3)
    with pytest.raises(ValidationError):
        cfg.window_spec(length=0)


def test_resolve_threads_precedence(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test flag over environment over configuration."""
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(None, 3) == 3
    monkeypatch.setenv(THREADS_ENV, "5")
    assert resolve_threads(None, 3) == 5
    assert resolve_threads(2, 3) == 2


def test_resolve_threads_zero_means_all_cpus(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that zero resolves to the CPU count."""
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads(0, 1) == (os.cpu_count() or 1)


def test_resolve_threads_bad_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that a non-integer environment value is rejected."""
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ConfigError, match=THREADS_ENV):
        resolve_threads(None, 1)
    with pytest.raises(ConfigError):
        resolve_threads(-2, 1)
