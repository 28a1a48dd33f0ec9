from datetime import UTC, datetime

from sqlmodel import Field, SQLModel


class BenchmarkRun(SQLModel, table=True):
    """One tracking run with its timing summary."""

    __tablename__ = "benchmarkrun"

    id: int | None = Field(default=None, primary_key=True)
    label: str = Field(index=True)
    n_objects: int = Field(index=True)
    scans: int
    threads: int
    seed: str
    clutter_rate: float
    median_scan_seconds: float
    total_seconds: float
    peak_group_size: int
    peak_group_count: int
    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC))


class ScanTiming(SQLModel, table=True):
    """Per-scan diagnostics of a benchmark run."""

    __tablename__ = "scantiming"

    id: int | None = Field(default=None, primary_key=True)
    run_id: int = Field(foreign_key="benchmarkrun.id", index=True)
    scan: int
    wall_time: float
    group_count: int
    max_group_size: int
    gate_prob_used: float
    label_count: int
    component_count: int
    estimated_cardinality: int
