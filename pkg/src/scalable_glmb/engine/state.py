"""Tracker state carried from scan to scan."""

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from ..core.types import FactoredGlmb, FloatArray, Label
from ..metrics.tracks import Track

TrackLog = Mapping[Label, tuple[tuple[int, FloatArray], ...]]


@dataclass(frozen=True)
class ScanDiagnostics:
    scan: int
    group_count: int
    max_group_size: int
    gate_prob_used: float
    label_count: int
    component_count: int
    estimated_cardinality: int
    wall_time: float


@dataclass(frozen=True, eq=False)
class TrackerState:
    """Factored posterior at `scan` plus everything reported so far.

    `unused_measurements` are the measurements of `scan` that the best
    component of no group used; they seed the births of the next scan.
    """

    factored: FactoredGlmb
    scan: int
    track_log: TrackLog = field(default_factory=lambda: MappingProxyType({}))
    diagnostics: tuple[ScanDiagnostics, ...] = ()
    unused_measurements: FloatArray = field(default_factory=lambda: np.zeros((0, 2)))
    low_existence_counts: Mapping[Label, int] = field(
        default_factory=lambda: MappingProxyType({})
    )
    terminated: frozenset[Label] = frozenset()

    @classmethod
    def initial(cls, first_scan: int = 1) -> "TrackerState":
        """Empty state ready to receive `first_scan`."""
        return cls(FactoredGlmb.empty(), first_scan - 1)

    def tracks(self) -> list[Track]:
        """Logged estimates as tracks, ordered by label."""
        return [
            Track(
                str(label),
                np.array([t for t, _ in entries], dtype=np.int64),
                np.array([state for _, state in entries]),
            )
            for label, entries in sorted(self.track_log.items())
        ]
