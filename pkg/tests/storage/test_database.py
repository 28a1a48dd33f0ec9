"""Tests for the benchmark results database."""

from collections.abc import Generator

import pytest
from sqlalchemy.engine import Engine
from sqlmodel import Session, create_engine, select

from scalable_glmb.engine.state import ScanDiagnostics
from scalable_glmb.storage import (
    ScanTiming,
    get_benchmark_runs,
    init_db,
    save_benchmark_run,
    summarize_run,
)


@pytest.fixture
def test_engine() -> Engine:
    """Create a test database engine using an in-memory SQLite database."""
    engine = create_engine("sqlite:///:memory:")
    init_db(engine)
    return engine


@pytest.fixture
def test_session(test_engine: Engine) -> Generator[Session, None, None]:
    """Create a test database session."""
    with Session(test_engine) as session:
        yield session


def _diagnostics(times: list[float]) -> list[ScanDiagnostics]:
    return [
        ScanDiagnostics(k + 1, 2 + k, 3, 0.99, 5, 10, 4, t)
        for k, t in enumerate(times)
    ]


def test_summarize_run() -> None:
    """Test the timing summary of a run."""
    run = summarize_run("scaling", 250, 4, 2**63 + 1, 25.0, _diagnostics([3, 1, 2]))
    assert run.scans == 3
    assert run.median_scan_seconds == 2.0
    assert run.total_seconds == 6.0
    assert run.peak_group_count == 4
    assert run.seed == str(2**63 + 1)


def test_save_and_query_runs(test_session: Session) -> None:
    """Test storing runs with timings and reading them back in order."""
    for n in (500, 250):
        run = summarize_run("scaling", n, 1, 0, 0.1 * n, _diagnostics([0.1, 0.2]))
        saved = save_benchmark_run(test_session, run, _diagnostics([0.1, 0.2]))
        assert saved.id is not None
    other = summarize_run("other", 10, 1, 0, 1.0, [])
    save_benchmark_run(test_session, other, [])

    runs = get_benchmark_runs(test_session, "scaling")
    assert [r.n_objects for r in runs] == [250, 500]
    assert len(get_benchmark_runs(test_session)) == 3

    run_id = runs[0].id
    assert run_id is not None
    statement = select(ScanTiming).where(ScanTiming.run_id == run_id)
    timings = sorted(test_session.exec(statement).all(), key=lambda t: t.scan)
    assert [t.scan for t in timings] == [1, 2]
    assert timings[1].wall_time == 0.2
