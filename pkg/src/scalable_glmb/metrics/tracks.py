"""Tracks: time-indexed state sequences."""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..core.types import FloatArray

POSITION_DIMS = 2


@dataclass(frozen=True, eq=False)
class Track:
    """States of one object at the scans where it exists.

    `times` is strictly increasing and `states` holds one row per time.
    """

    id: str
    times: NDArray[np.int64]
    states: FloatArray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.int64).reshape(-1)
        states = np.asarray(self.states, dtype=np.float64)
        if states.ndim == 1:
            width = -1 if times.size else POSITION_DIMS
            states = states.reshape(times.size, width)
        if states.shape[0] != times.size:
            msg = f"track {self.id} has {times.size} times but {states.shape[0]} states"
            raise ValueError(msg)
        if np.any(np.diff(times) <= 0):
            raise ValueError(f"track {self.id} times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def is_empty(self) -> bool:
        return self.times.size == 0

    @property
    def start(self) -> int:
        return int(self.times[0])

    @property
    def end(self) -> int:
        return int(self.times[-1])

    def __len__(self) -> int:
        return int(self.times.size)

    def points(self, full_state: bool = False) -> FloatArray:
        """States used by the base distance: positions, or full states."""
        return self.states if full_state else self.states[:, :POSITION_DIMS]

    def state_at(self, t: int) -> FloatArray | None:
        i = int(np.searchsorted(self.times, t))
        if i < self.times.size and self.times[i] == t:
            return self.states[i]
        return None

    def restrict(self, start: int, end: int) -> "Track":
        """The part of the track inside the closed interval [start, end]."""
        lo = int(np.searchsorted(self.times, start, side="left"))
        hi = int(np.searchsorted(self.times, end, side="right"))
        return Track(self.id, self.times[lo:hi], self.states[lo:hi])


def time_range(tracks: Sequence[Track]) -> tuple[int, int] | None:
    """Smallest and largest time over non-empty tracks."""
    spans = [(t.start, t.end) for t in tracks if not t.is_empty]
    if not spans:
        return None
    return min(s for s, _ in spans), max(e for _, e in spans)


def states_at(tracks: Sequence[Track], t: int, full_state: bool = False) -> FloatArray:
    """(n, d) array of the states of all tracks existing at time t."""
    rows = []
    for track in tracks:
        state = track.state_at(t)
        if state is not None:
            rows.append(state if full_state else state[:POSITION_DIMS])
    if rows:
        return np.array(rows)
    width = POSITION_DIMS
    if full_state:
        non_empty = (tr.states.shape[1] for tr in tracks if not tr.is_empty)
        width = next(non_empty, POSITION_DIMS)
    return np.zeros((0, width))
