import statistics
from collections.abc import Sequence
from pathlib import Path

from sqlalchemy.engine import Engine
from sqlmodel import Session, SQLModel, create_engine, select

from ..engine.state import ScanDiagnostics
from .models import BenchmarkRun, ScanTiming

DEFAULT_DB_PATH = Path("glmb_benchmarks.db")


def get_engine(path: Path = DEFAULT_DB_PATH) -> Engine:
    """Engine for a SQLite file; ':memory:' gives a throwaway database."""
    return create_engine(f"sqlite:///{path}")


def init_db(engine: Engine) -> None:
    """Create the benchmark tables if they do not exist."""
    SQLModel.metadata.create_all(engine)


def summarize_run(
    label: str,
    n_objects: int,
    threads: int,
    seed: int,
    clutter_rate: float,
    diagnostics: Sequence[ScanDiagnostics],
) -> BenchmarkRun:
    """Benchmark row summarizing the diagnostics of one run."""
    times = [d.wall_time for d in diagnostics]
    return BenchmarkRun(
        label=label,
        n_objects=n_objects,
        scans=len(diagnostics),
        threads=threads,
        # SQLite integers are signed 64-bit
        seed=str(seed),
        clutter_rate=clutter_rate,
        median_scan_seconds=statistics.median(times) if times else 0.0,
        total_seconds=sum(times),
        peak_group_size=max((d.max_group_size for d in diagnostics), default=0),
        peak_group_count=max((d.group_count for d in diagnostics), default=0),
    )


def save_benchmark_run(
    session: Session, run: BenchmarkRun, diagnostics: Sequence[ScanDiagnostics]
) -> BenchmarkRun:
    """Store a run and its per-scan timings.

    Args:
        session: Open database session
        run: Summary row, e.g. from summarize_run
        diagnostics: Per-scan records of the run

    Returns:
        The stored run with its id set
    """
    session.add(run)
    session.commit()
    session.refresh(run)
    assert run.id is not None
    for d in diagnostics:
        session.add(
            ScanTiming(
                run_id=run.id,
                scan=d.scan,
                wall_time=d.wall_time,
                group_count=d.group_count,
                max_group_size=d.max_group_size,
                gate_prob_used=d.gate_prob_used,
                label_count=d.label_count,
                component_count=d.component_count,
                estimated_cardinality=d.estimated_cardinality,
            )
        )
    session.commit()
    session.refresh(run)
    return run


def get_benchmark_runs(
    session: Session, label: str | None = None
) -> list[BenchmarkRun]:
    """Stored runs ordered by object count then creation time."""
    statement = select(BenchmarkRun)
    if label is not None:
        statement = statement.where(BenchmarkRun.label == label)
    statement = statement.order_by(
        BenchmarkRun.n_objects,  # type: ignore[arg-type]
        BenchmarkRun.created_at,  # type: ignore[arg-type]
    )
    return list(session.exec(statement).all())
