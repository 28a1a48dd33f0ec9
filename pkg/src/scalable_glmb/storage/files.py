"""Scan, track and table files, each tagged with a schema name and version.

Scans and tracks are JSON lines whose first line is the header object
{"schema": <name>, "version": 1}. Tables are CSV files whose first line is
`# schema=<name> version=1`, followed by a header row.
"""

import csv
import json
from collections.abc import Iterable, Iterator, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from ..core.errors import SchemaError
from ..engine.state import ScanDiagnostics
from ..metrics.tracks import Track
from ..simulation.measurements import ScanData

SCHEMA_VERSION = 1

SCANS_SCHEMA = "scans"
TRACKS_SCHEMA = "tracks"
DIAGNOSTICS_SCHEMA = "diagnostics"
OSPA2_SCHEMA = "ospa2"
OSPA_SCHEMA = "ospa"
CARDINALITY_SCHEMA = "cardinality"
DENSITY_SCHEMA = "density"

DIAGNOSTICS_COLUMNS = (
    "scan",
    "group_count",
    "max_group_size",
    "gate_prob_used",
    "label_count",
    "component_count",
    "estimated_cardinality",
    "wall_time",
)


def _dumps(obj: object) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _write_jsonl(path: Path, schema: str, records: Iterable[object]) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(_dumps({"schema": schema, "version": SCHEMA_VERSION}) + "\n")
        for record in records:
            f.write(_dumps(record) + "\n")


def _read_jsonl(path: Path, schema: str) -> Iterator[dict[str, Any]]:
    with path.open(encoding="utf-8") as f:
        first = f.readline()
        try:
            header = json.loads(first) if first.strip() else None
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: first line is not a schema header") from e
        _check_header(path, header, schema)
        for number, line in enumerate(f, start=2):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"{path}:{number}: invalid JSON record") from e


def _check_header(path: Path, header: object, schema: str) -> None:
    if not isinstance(header, dict) or "schema" not in header:
        raise SchemaError(f"{path}: missing schema header, expected {schema!r}")
    if header["schema"] != schema:
        msg = f"{path}: schema is {header['schema']!r}, expected {schema!r}"
        raise SchemaError(msg)
    if header.get("version") != SCHEMA_VERSION:
        msg = f"{path}: unsupported {schema} version {header.get('version')!r}"
        raise SchemaError(msg)


def write_scans(path: Path, scans: Sequence[ScanData]) -> None:
    """One {"scan", "measurements"} object per line."""
    _write_jsonl(
        path,
        SCANS_SCHEMA,
        ({"scan": s.scan, "measurements": s.measurements.tolist()} for s in scans),
    )


def read_scans(path: Path) -> list[ScanData]:
    """Read a scans file.

    Raises:
        SchemaError: If the header or a record is malformed
    """
    scans = []
    for record in _read_jsonl(path, SCANS_SCHEMA):
        try:
            z = np.asarray(record["measurements"], dtype=np.float64).reshape(-1, 2)
            scans.append(ScanData(int(record["scan"]), z))
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"{path}: malformed scan record: {e}") from e
    return scans


def write_tracks(path: Path, tracks: Sequence[Track]) -> None:
    """One {"id", "states": [[t, x, y, vx, vy], ...]} object per line."""

    def record(track: Track) -> dict[str, object]:
        rows = np.column_stack([track.times.astype(np.float64), track.states])
        states = [[int(row[0]), *row[1:].tolist()] for row in rows]
        return {"id": track.id, "states": states}

    _write_jsonl(path, TRACKS_SCHEMA, (record(t) for t in tracks))


def read_tracks(path: Path) -> list[Track]:
    """Read a tracks file.

    Raises:
        SchemaError: If the header or a record is malformed
    """
    tracks = []
    for record in _read_jsonl(path, TRACKS_SCHEMA):
        try:
            rows = record["states"]
            times = np.array([int(row[0]) for row in rows], dtype=np.int64)
            states = np.array([row[1:] for row in rows], dtype=np.float64)
            tracks.append(Track(str(record["id"]), times, states))
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise SchemaError(f"{path}: malformed track record: {e}") from e
    return tracks


def write_table(
    path: Path, schema: str, columns: Sequence[str], rows: Iterable[Sequence[object]]
) -> None:
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(f"# schema={schema} version={SCHEMA_VERSION}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)


def read_table(path: Path, schema: str) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a table file, after checking its schema line.

    Raises:
        SchemaError: If the schema line is missing or names another schema
    """
    with path.open(encoding="utf-8", newline="") as f:
        first = f.readline().strip()
        fields = dict(
            part.split("=", 1) for part in first.lstrip("#").split() if "=" in part
        )
        if not first.startswith("#") or "schema" not in fields:
            raise SchemaError(f"{path}: missing schema line, expected {schema!r}")
        try:
            version = int(fields.get("version", ""))
        except ValueError:
            version = -1
        _check_header(path, {"schema": fields["schema"], "version": version}, schema)
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: missing header row")
        return header, [row for row in reader if row]


def write_diagnostics(path: Path, diagnostics: Sequence[ScanDiagnostics]) -> None:
    write_table(
        path,
        DIAGNOSTICS_SCHEMA,
        DIAGNOSTICS_COLUMNS,
        (
            (
                d.scan,
                d.group_count,
                d.max_group_size,
                repr(d.gate_prob_used),
                d.label_count,
                d.component_count,
                d.estimated_cardinality,
                f"{d.wall_time:.6f}",
            )
            for d in diagnostics
        ),
    )


def read_diagnostics(path: Path) -> list[ScanDiagnostics]:
    header, rows = read_table(path, DIAGNOSTICS_SCHEMA)
    if tuple(header) != DIAGNOSTICS_COLUMNS:
        raise SchemaError(f"{path}: unexpected columns {header}")
    try:
        return [
            ScanDiagnostics(
                scan=int(r[0]),
                group_count=int(r[1]),
                max_group_size=int(r[2]),
                gate_prob_used=float(r[3]),
                label_count=int(r[4]),
                component_count=int(r[5]),
                estimated_cardinality=int(r[6]),
                wall_time=float(r[7]),
            )
            for r in rows
        ]
    except (ValueError, IndexError) as e:
        raise SchemaError(f"{path}: malformed diagnostics row: {e}") from e


def write_series(
    path: Path, schema: str, column: str, series: Iterable[tuple[int, float]]
) -> None:
    """Two-column table of (scan, value)."""
    write_table(path, schema, ("scan", column), ((k, repr(v)) for k, v in series))


def read_series(path: Path, schema: str) -> list[tuple[int, float]]:
    _, rows = read_table(path, schema)
    try:
        return [(int(r[0]), float(r[1])) for r in rows]
    except (ValueError, IndexError) as e:
        raise SchemaError(f"{path}: malformed row: {e}") from e
