"""Typer CLI application for scalable-glmb."""

import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError

from ..config import RunConfig, load_run_config, resolve_threads
from ..core.errors import ConfigError, GlmbError, SchemaError

app = typer.Typer(help="Partitioned GLMB multi-object tracking and OSPA(2) evaluation")

USAGE_EXIT = 2
RUNTIME_EXIT = 3


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map bad input to exit code 2 and tracker failures to exit code 3."""
    try:
        yield
    except (ConfigError, SchemaError, ValidationError, ValueError, OSError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=USAGE_EXIT) from e
    except GlmbError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=RUNTIME_EXIT) from e


def _load_config(path: Path | None, seed: int | None) -> RunConfig:
    cfg = load_run_config(path) if path is not None else RunConfig()
    return cfg.with_seed(seed)


ConfigOption = Annotated[
    Path | None, typer.Option("--config", "-c", help="Run configuration (TOML)")
]
SeedOption = Annotated[
    int | None, typer.Option("--seed", help="Root seed (unsigned 64-bit)")
]
ThreadsOption = Annotated[
    int | None,
    typer.Option("--threads", help="Worker threads, 0 for one per CPU"),
]
OutOption = Annotated[
    Path | None, typer.Option("--out", "-o", help="Output directory")
]
VerboseOption = Annotated[
    bool, typer.Option("--verbose", "-v", help="Enable verbose output")
]
FormatOption = Annotated[
    str, typer.Option("--format", "-f", help="Output format: table, json, csv")
]
DirOption = Annotated[Path, typer.Option("--out", "-o", help="Output directory")]


@app.command()
def simulate(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    verbose: VerboseOption = False,
) -> None:
    """Simulate a scenario and write truth.tracks and scans.jsonl."""
    _configure_logging(verbose)
    with _exit_codes():
        from ..simulation.scenarios import simulate as simulate_scenario
        from ..storage.files import write_scans, write_tracks

        cfg = _load_config(config, seed)
        out_dir = out or cfg.output_dir
        out_dir.mkdir(parents=True, exist_ok=True)
        scenario_cfg = cfg.scenario_config()

        if verbose:
            typer.echo(f"Seed: {cfg.seed}")
            typer.echo(f"Scans: {scenario_cfg.duration}")

        scenario = simulate_scenario(scenario_cfg)
        write_tracks(out_dir / "truth.tracks", scenario.truth)
        write_scans(out_dir / "scans.jsonl", scenario.scans)
        n_meas = sum(len(scan) for scan in scenario.scans)
        typer.echo(
            f"Simulated {len(scenario.truth)} objects and {n_meas} measurements "
            f"over {len(scenario.scans)} scans into {out_dir}"
        )


@app.command()
def track(
    config: ConfigOption = None,
    scans: Annotated[
        Path | None,
        typer.Option("--scans", help="Scans file (default <out>/scans.jsonl)"),
    ] = None,
    seed: SeedOption = None,
    threads: ThreadsOption = None,
    out: OutOption = None,
    db: Annotated[
        Path | None, typer.Option("--db", help="Record the run in this database")
    ] = None,
    verbose: VerboseOption = False,
) -> None:
    """Track a scans file and write est.tracks and diag.csv."""
    _configure_logging(verbose)
    with _exit_codes():
        from sqlmodel import Session

        from ..engine.tracker import run
        from ..storage.database import (
            get_engine,
            init_db,
            save_benchmark_run,
            summarize_run,
        )
        from ..storage.files import read_scans, write_diagnostics, write_tracks

        cfg = _load_config(config, seed)
        out_dir = out or cfg.output_dir
        scans_path = scans or out_dir / "scans.jsonl"
        n_threads = resolve_threads(threads, cfg.threads)
        scan_data = read_scans(scans_path)

        if verbose:
            typer.echo(f"Scans: {len(scan_data)} from {scans_path}")
            typer.echo(f"Threads: {n_threads}")

        tracks, diagnostics = run(
            scan_data, cfg.model_set(), cfg.engine_config(n_threads)
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        write_tracks(out_dir / "est.tracks", tracks)
        write_diagnostics(out_dir / "diag.csv", diagnostics)
        typer.echo(f"Wrote {len(tracks)} tracks over {len(diagnostics)} scans")

        if db is not None:
            engine = get_engine(db)
            init_db(engine)
            peak = max((d.estimated_cardinality for d in diagnostics), default=0)
            summary = summarize_run(
                "track", peak, n_threads, cfg.seed, cfg.models.clutter_rate, diagnostics
            )
            with Session(engine) as session:
                stored = save_benchmark_run(session, summary, diagnostics)
                typer.echo(f"Recorded run {stored.id} in {db}")


@app.command()
def evaluate(
    truth: Annotated[Path, typer.Argument(help="Truth tracks file")],
    estimates: Annotated[Path, typer.Argument(help="Estimated tracks file")],
    config: ConfigOption = None,
    cutoff: Annotated[
        float | None, typer.Option("--cutoff", help="Cutoff c in metres")
    ] = None,
    order: Annotated[float | None, typer.Option("--order", help="Order p")] = None,
    window: Annotated[
        int | None, typer.Option("--window", help="Window length in scans")
    ] = None,
    stride: Annotated[
        int | None, typer.Option("--stride", help="Scans between evaluations")
    ] = None,
    sparse: Annotated[
        bool, typer.Option("--sparse", help="Use the sparse assignment pipeline")
    ] = False,
    threads: ThreadsOption = None,
    out: DirOption = Path("out"),
    verbose: VerboseOption = False,
) -> None:
    """Write the windowed OSPA2 series (and per-scan OSPA for window 1).

    Metric and window parameters come from the run configuration; the flags
    override them.
    """
    _configure_logging(verbose)
    with _exit_codes():
        from ..engine.tracker import thread_pool
        from ..metrics.tracks import time_range
        from ..metrics.windowed import EvaluationMethod, ospa2_windowed, ospa_series
        from ..storage.files import (
            OSPA2_SCHEMA,
            OSPA_SCHEMA,
            read_tracks,
            write_series,
        )

        cfg = _load_config(config, None)
        metric = cfg.metric_config(cutoff=cutoff, order=order)
        window_cfg = cfg.window_spec(length=window, stride=stride)
        xs = read_tracks(truth)
        ys = read_tracks(estimates)
        horizon = time_range([*xs, *ys])
        if horizon is None:
            raise ValueError("neither track file has any state")
        method = EvaluationMethod.SPARSE if sparse else EvaluationMethod.DENSE

        if verbose:
            typer.echo(f"Horizon: scans {horizon[0]}..{horizon[1]}")
            typer.echo(
                f"Cutoff {metric.cutoff}, order {metric.order}, "
                f"window {window_cfg.length} ({method})"
            )

        with thread_pool(resolve_threads(threads, cfg.threads)) as executor:
            series = ospa2_windowed(
                xs, ys, metric, window_cfg, horizon, method, executor
            )
        out.mkdir(parents=True, exist_ok=True)
        write_series(out / "ospa2.csv", OSPA2_SCHEMA, "ospa2", series)
        if window_cfg.length == 1:
            per_scan = ospa_series(xs, ys, metric, horizon)
            write_series(out / "ospa.csv", OSPA_SCHEMA, "ospa", per_scan)
        typer.echo(
            f"OSPA2 at {len(series)} scans, final value {series[-1][1]:.4f}"
        )


@app.command()
def report(
    truth: Annotated[Path, typer.Argument(help="Truth tracks file")],
    estimates: Annotated[Path, typer.Argument(help="Estimated tracks file")],
    diag: Annotated[
        Path | None, typer.Option("--diag", help="Diagnostics CSV from track")
    ] = None,
    ospa2: Annotated[
        Path | None, typer.Option("--ospa2", help="OSPA2 CSV from evaluate")
    ] = None,
    config: ConfigOption = None,
    cell_size: Annotated[
        float, typer.Option("--cell-size", help="Density grid cell size in metres")
    ] = 100.0,
    snapshots: Annotated[
        int, typer.Option("--snapshots", help="Number of density snapshot scans")
    ] = 3,
    out: DirOption = Path("out"),
    output_format: FormatOption = "table",
    verbose: VerboseOption = False,
) -> None:
    """Print a run summary and write cardinality and density plot data."""
    _configure_logging(verbose)
    with _exit_codes():
        from ..metrics.plotdata import cardinality_series
        from ..metrics.tracks import time_range
        from ..storage.files import (
            CARDINALITY_SCHEMA,
            DENSITY_SCHEMA,
            OSPA2_SCHEMA,
            read_diagnostics,
            read_series,
            read_tracks,
            write_table,
        )
        from .output import format_summary
        from .report import build_summary, density_snapshots, snapshot_scans

        if output_format not in ("table", "json", "csv"):
            raise ValueError(f"unknown format {output_format!r}")
        xs = read_tracks(truth)
        ys = read_tracks(estimates)
        diagnostics = read_diagnostics(diag) if diag is not None else []
        series = read_series(ospa2, OSPA2_SCHEMA) if ospa2 is not None else []
        horizon = time_range([*xs, *ys])
        if horizon is None:
            raise ValueError("neither track file has any state")
        summary = build_summary(xs, ys, diagnostics, series)

        region = _load_config(config, None).scenario.region.to_region()
        out.mkdir(parents=True, exist_ok=True)
        write_table(
            out / "cardinality.csv",
            CARDINALITY_SCHEMA,
            ("scan", "true", "estimated"),
            cardinality_series(xs, ys, horizon),
        )
        grids = density_snapshots(
            xs, ys, snapshot_scans(horizon, snapshots), region, cell_size
        )
        write_table(
            out / "density.csv",
            DENSITY_SCHEMA,
            ("scan", "source", "x", "y", "count"),
            (
                (grid.scan, source, repr(x), repr(y), count)
                for source, grid in grids
                for x, y, count in grid.cells()
            ),
        )
        typer.echo(format_summary(summary, output_format))  # type: ignore[arg-type]


@app.command()
def benchmark(
    objects: Annotated[
        str, typer.Option("--objects", help="Comma-separated object counts")
    ] = "250,500",
    scans: Annotated[int, typer.Option("--scans", help="Scans per run")] = 10,
    clutter_per_object: Annotated[
        float,
        typer.Option("--clutter-per-object", help="Clutter rate per object"),
    ] = 0.1,
    spacing: Annotated[
        float, typer.Option("--spacing", help="Distance between objects in metres")
    ] = 200.0,
    seed: Annotated[int, typer.Option("--seed", help="Root seed")] = 0,
    threads: ThreadsOption = None,
    db: Annotated[
        Path | None, typer.Option("--db", help="Record every run in this database")
    ] = None,
    output_format: FormatOption = "table",
    verbose: VerboseOption = False,
) -> None:
    """Time the tracker on well-separated scenarios of growing size.

    Clutter grows with the object count, so the per-object load stays fixed.
    """
    _configure_logging(verbose)
    with _exit_codes():
        from sqlmodel import Session

        from ..core.hashing import derive_seed
        from ..engine.config import EngineConfig
        from ..engine.tracker import run
        from ..models.config import ModelConfig, ModelSet
        from ..simulation.scenarios import separated_scenario
        from ..storage.database import (
            get_engine,
            init_db,
            save_benchmark_run,
            summarize_run,
        )
        from .output import format_benchmark

        if output_format not in ("table", "json", "csv"):
            raise ValueError(f"unknown format {output_format!r}")
        counts = [int(part) for part in objects.split(",") if part.strip()]
        if not counts or min(counts) < 1:
            raise ValueError(f"--objects needs positive counts, got {objects!r}")
        n_threads = resolve_threads(threads, 1)
        engine = get_engine(db) if db is not None else None
        if engine is not None:
            init_db(engine)

        rows = []
        for n in counts:
            clutter = clutter_per_object * n
            scenario = separated_scenario(
                n,
                spacing=spacing,
                duration=scans,
                clutter_rate=clutter,
                rng_seed=derive_seed(seed, "benchmark", n),
            )
            scenario_cfg = scenario.config
            models = ModelSet.from_config(
                ModelConfig(
                    detection_prob=scenario_cfg.detection_prob,
                    clutter_rate=clutter,
                    noise_sigma=scenario_cfg.meas_noise_sigma,
                ),
                scenario_cfg.region.to_region(),
            )
            cfg = EngineConfig(threads=n_threads, seed=derive_seed(seed, "tracker"))
            if verbose:
                typer.echo(f"Running {n} objects, clutter rate {clutter:g}...")
            _, diagnostics = run(scenario.scans, models, cfg)
            row = summarize_run("separated", n, n_threads, seed, clutter, diagnostics)
            if engine is not None:
                with Session(engine) as session:
                    row = save_benchmark_run(session, row, diagnostics)
            rows.append(row)

        typer.echo(format_benchmark(rows, output_format))  # type: ignore[arg-type]


@app.command()
def runs(
    db: Annotated[Path, typer.Argument(help="Database written by track or benchmark")],
    label: Annotated[
        str | None,
        typer.Option("--label", help="Only runs with this label (track, separated)"),
    ] = None,
    output_format: FormatOption = "table",
) -> None:
    """List the runs recorded in a database."""
    with _exit_codes():
        from sqlmodel import Session

        from ..storage.database import get_benchmark_runs, get_engine, init_db
        from .output import format_benchmark

        if output_format not in ("table", "json", "csv"):
            raise ValueError(f"unknown format {output_format!r}")
        if not db.is_file():
            raise ValueError(f"no database at {db}")
        engine = get_engine(db)
        init_db(engine)
        with Session(engine) as session:
            stored = get_benchmark_runs(session, label)
        typer.echo(format_benchmark(stored, output_format))  # type: ignore[arg-type]


if __name__ == "__main__":
    app()
