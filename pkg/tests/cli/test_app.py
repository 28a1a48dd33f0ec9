"""End-to-end tests of the glmb-track commands."""

import json
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest
from sqlmodel import Session
from typer.testing import CliRunner

from scalable_glmb.cli import app
from scalable_glmb.metrics.tracks import Track
from scalable_glmb.storage.database import (
    get_benchmark_runs,
    get_engine,
    init_db,
    save_benchmark_run,
    summarize_run,
)
from scalable_glmb.storage.files import (
    DIAGNOSTICS_SCHEMA,
    OSPA2_SCHEMA,
    OSPA_SCHEMA,
    read_diagnostics,
    read_scans,
    read_series,
    read_table,
    read_tracks,
    write_tracks,
)

runner = CliRunner()

TINY = """\
seed = 7

[scenario]
duration = 6
clutter_rate = 1.0

[[scenario.birth_windows]]
start = 1
end = 3
rate = 1.0

[models]
clutter_rate = 1.0

[update]
requested_components = 20
gibbs_iterations = 100
"""


@pytest.fixture
def config_path(tmp_path: Path) -> Path:
    path = tmp_path / "run.toml"
    path.write_text(TINY, encoding="utf-8")
    return path


@pytest.fixture
def track_files(tmp_path: Path) -> tuple[Path, Path]:
    """Truth and estimate files for a single object seen at scans 1..5."""
    states = np.column_stack(
        [np.linspace(100.0, 104.0, 5), np.full(5, 200.0), np.ones(5), np.zeros(5)]
    )
    truth = tmp_path / "truth.tracks"
    estimates = tmp_path / "est.tracks"
    write_tracks(truth, [Track("0", np.arange(1, 6), states)])
    write_tracks(estimates, [Track("1.0", np.arange(1, 6), states + 0.5)])
    return truth, estimates


@pytest.mark.integration
def test_simulate_writes_reproducible_files(
    config_path: Path, tmp_path: Path
) -> None:
    """Test that simulate writes truth and scans, identical on a rerun."""
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        args = ["simulate", "-c", str(config_path), "-o", str(out)]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        assert "Simulated" in result.output
    for name in ("truth.tracks", "scans.jsonl"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    assert [s.scan for s in read_scans(first / "scans.jsonl")] == list(range(1, 7))


@pytest.mark.integration
def test_seed_flag_changes_scenario(config_path: Path, tmp_path: Path) -> None:
    """Test that --seed overrides the configured seed."""
    for name, seed in (("a", "7"), ("b", "8")):
        args = ["simulate", "-c", str(config_path), "-o", str(tmp_path / name)]
        result = runner.invoke(app, [*args, "--seed", seed])
        assert result.exit_code == 0, result.output
    a = (tmp_path / "a" / "scans.jsonl").read_bytes()
    b = (tmp_path / "b" / "scans.jsonl").read_bytes()
    assert a != b


@pytest.mark.integration
def test_track_writes_estimates_and_diagnostics(
    config_path: Path, tmp_path: Path
) -> None:
    """Test simulate then track, recording the run in a database."""
    out = tmp_path / "out"
    db = tmp_path / "runs.db"
    result = runner.invoke(app, ["simulate", "-c", str(config_path), "-o", str(out)])
    assert result.exit_code == 0, result.output

    result = runner.invoke(
        app,
        [
            "track",
            "-c",
            str(config_path),
            "-o",
            str(out),
            "--threads",
            "2",
            "--db",
            str(db),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "Recorded run" in result.output
    read_tracks(out / "est.tracks")
    diagnostics = read_diagnostics(out / "diag.csv")
    assert [d.scan for d in diagnostics] == list(range(1, 7))

    with Session(get_engine(db)) as session:
        runs = get_benchmark_runs(session, "track")
    assert len(runs) == 1
    assert runs[0].scans == 6
    assert runs[0].threads == 2


@pytest.mark.integration
def test_track_rerun_is_identical(config_path: Path, tmp_path: Path) -> None:
    """Test that tracking the same scans twice gives the same output."""
    scans = tmp_path / "sim" / "scans.jsonl"
    result = runner.invoke(
        app, ["simulate", "-c", str(config_path), "-o", str(scans.parent)]
    )
    assert result.exit_code == 0, result.output

    outputs = []
    for name, threads in (("one", "1"), ("two", "2")):
        out = tmp_path / name
        args = ["track", "-c", str(config_path), "--scans", str(scans)]
        result = runner.invoke(app, [*args, "-o", str(out), "--threads", threads])
        assert result.exit_code == 0, result.output
        _, rows = read_table(out / "diag.csv", DIAGNOSTICS_SCHEMA)
        timeless = [row[:-1] for row in rows]
        outputs.append(((out / "est.tracks").read_bytes(), timeless))
    assert outputs[0] == outputs[1]


@pytest.mark.integration
def test_track_missing_scans_is_usage_error(
    config_path: Path, tmp_path: Path
) -> None:
    """Test that a missing scans file exits with code 2."""
    result = runner.invoke(
        app, ["track", "-c", str(config_path), "-o", str(tmp_path / "empty")]
    )
    assert result.exit_code == 2


def test_bad_config_is_usage_error(tmp_path: Path) -> None:
    """Test that an unknown key exits with code 2 and names the key."""
    path = tmp_path / "bad.toml"
    path.write_text("[scenario]\nbogus = 1\n", encoding="utf-8")
    result = runner.invoke(app, ["simulate", "-c", str(path), "-o", str(tmp_path)])
    assert result.exit_code == 2
    assert "bogus" in result.output


def test_nested_seed_is_usage_error(tmp_path: Path) -> None:
    """Test that a scenario-level seed is refused."""
    path = tmp_path / "bad.toml"
    path.write_text("[scenario]\nrng_seed = 3\n", encoding="utf-8")
    result = runner.invoke(app, ["simulate", "-c", str(path), "-o", str(tmp_path)])
    assert result.exit_code == 2


def test_evaluate_window_one_writes_ospa(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that a one-scan window also writes the per-scan OSPA series."""
    truth, estimates = track_files
    out = tmp_path / "eval"
    result = runner.invoke(
        app,
        [
            "evaluate",
            str(truth),
            str(estimates),
            "--window",
            "1",
            "--cutoff",
            "2",
            "-o",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    ospa2 = read_series(out / "ospa2.csv", OSPA2_SCHEMA)
    ospa = read_series(out / "ospa.csv", OSPA_SCHEMA)
    assert [k for k, _ in ospa2] == [1, 2, 3, 4, 5]
    # one pair offset by (0.5, 0.5) in position
    expected = np.hypot(0.5, 0.5)
    for (_, v2), (_, v) in zip(ospa2, ospa, strict=True):
        assert v2 == pytest.approx(expected)
        assert v == pytest.approx(expected)


def test_evaluate_reads_metric_and_window_from_config(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that the run configuration sets the metric and flags override it."""
    truth, estimates = track_files
    path = tmp_path / "metric.toml"
    path.write_text("[metric]\ncutoff = 0.5\n\n[window]\nlength = 1\n", "utf-8")
    expected = {"config": 0.5, "flag": float(np.hypot(0.5, 0.5))}
    for name, extra in (("config", []), ("flag", ["--cutoff", "2"])):
        out = tmp_path / name
        args = ["evaluate", str(truth), str(estimates), "-c", str(path)]
        result = runner.invoke(app, [*args, *extra, "-o", str(out)])
        assert result.exit_code == 0, result.output
        ospa = read_series(out / "ospa.csv", OSPA_SCHEMA)
        assert [v for _, v in ospa] == pytest.approx([expected[name]] * 5)


def test_evaluate_rejects_invalid_override(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that a non-positive cutoff flag exits with code 2."""
    truth, estimates = track_files
    result = runner.invoke(
        app,
        ["evaluate", str(truth), str(estimates), "--cutoff", "0", "-o", str(tmp_path)],
    )
    assert result.exit_code == 2


def test_evaluate_sparse_matches_dense(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that --sparse writes the same series as the dense pipeline."""
    truth, estimates = track_files
    series = []
    for name, extra in (("dense", []), ("sparse", ["--sparse"])):
        out = tmp_path / name
        args = ["evaluate", str(truth), str(estimates), "--window", "3"]
        result = runner.invoke(app, [*args, *extra, "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert not (out / "ospa.csv").exists()
        series.append(read_series(out / "ospa2.csv", OSPA2_SCHEMA))
    dense, sparse = series
    assert [k for k, _ in dense] == [k for k, _ in sparse]
    for (_, a), (_, b) in zip(dense, sparse, strict=True):
        assert a == pytest.approx(b)


def test_evaluate_without_states_is_usage_error(tmp_path: Path) -> None:
    """Test that two empty track files exit with code 2."""
    empty = tmp_path / "empty.tracks"
    write_tracks(empty, [])
    result = runner.invoke(
        app, ["evaluate", str(empty), str(empty), "-o", str(tmp_path / "eval")]
    )
    assert result.exit_code == 2
    assert "neither track file" in result.output


def test_report_json_and_plot_data(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that report prints a JSON summary and writes the plot tables."""
    truth, estimates = track_files
    out = tmp_path / "report"
    result = runner.invoke(
        app, ["report", str(truth), str(estimates), "-o", str(out), "-f", "json"]
    )
    assert result.exit_code == 0, result.output
    summary = json.loads(result.stdout)
    assert summary["scans"] == 5
    assert summary["mean_true_cardinality"] == 1.0
    assert summary["final_ospa2"] is None
    assert (out / "cardinality.csv").exists()
    assert (out / "density.csv").exists()


def test_report_cardinality_table(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test the exact cardinality table written by report."""
    truth, estimates = track_files
    out = tmp_path / "report"
    result = runner.invoke(app, ["report", str(truth), str(estimates), "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "cardinality.csv").read_text(encoding="utf-8") == (
        "# schema=cardinality version=1\n"
        "scan,true,estimated\n"
        "1,1,1\n"
        "2,1,1\n"
        "3,1,1\n"
        "4,1,1\n"
        "5,1,1\n"
    )


def test_report_without_states_is_usage_error(tmp_path: Path) -> None:
    """Test that report on two empty track files exits with code 2."""
    empty = tmp_path / "empty.tracks"
    write_tracks(empty, [])
    result = runner.invoke(
        app, ["report", str(empty), str(empty), "-o", str(tmp_path / "report")]
    )
    assert result.exit_code == 2
    assert "neither track file" in result.output


def test_report_rejects_unknown_format(
    track_files: tuple[Path, Path], tmp_path: Path
) -> None:
    """Test that an unknown output format exits with code 2."""
    truth, estimates = track_files
    result = runner.invoke(
        app, ["report", str(truth), str(estimates), "-o", str(tmp_path), "-f", "xml"]
    )
    assert result.exit_code == 2


@pytest.mark.integration
def test_benchmark_records_runs(tmp_path: Path) -> None:
    """Test a two-object benchmark run stored in a database."""
    db = tmp_path / "bench.db"
    result = runner.invoke(
        app,
        ["benchmark", "--objects", "2", "--scans", "3", "--db", str(db), "-f", "csv"],
    )
    assert result.exit_code == 0, result.output
    lines = result.stdout.strip().split("\n")
    assert lines[0].startswith("n_objects")
    assert lines[1].startswith("2,3,1,")
    with Session(get_engine(db)) as session:
        runs = get_benchmark_runs(session, "separated")
    assert [r.n_objects for r in runs] == [2]

    result = runner.invoke(app, ["runs", str(db), "--label", "separated", "-f", "json"])
    assert result.exit_code == 0, result.output
    assert [r["n_objects"] for r in json.loads(result.stdout)] == [2]


def test_runs_lists_recorded_runs(tmp_path: Path) -> None:
    """Test listing a database filled directly, filtered by label."""
    db = tmp_path / "runs.db"
    engine = get_engine(db)
    init_db(engine)
    with Session(engine) as session:
        for label, n in (("track", 3), ("separated", 10), ("separated", 5)):
            save_benchmark_run(session, summarize_run(label, n, 1, 0, 1.0, []), [])
    result = runner.invoke(app, ["runs", str(db), "--label", "separated", "-f", "csv"])
    assert result.exit_code == 0, result.output
    rows = result.stdout.strip().split("\n")[1:]
    assert [row.split(",")[0] for row in rows] == ["5", "10"]


def test_runs_missing_database_is_usage_error(tmp_path: Path) -> None:
    """Test that a missing database file exits with code 2."""
    result = runner.invoke(app, ["runs", str(tmp_path / "none.db")])
    assert result.exit_code == 2


def test_benchmark_rejects_bad_counts() -> None:
    """Test that non-positive object counts exit with code 2."""
    result = runner.invoke(app, ["benchmark", "--objects", "0"])
    assert result.exit_code == 2


@pytest.mark.integration
@pytest.mark.timeout(300)
def test_cli_entry_point() -> None:
    """Test that the installed glmb-track script starts."""
    if not shutil.which("uv"):
        pytest.skip("uv not found")
    result = subprocess.run(
        ["uv", "run", "glmb-track", "--help"], capture_output=True, text=True
    )
    assert result.returncode == 0, result.stderr
    assert "simulate" in result.stdout
