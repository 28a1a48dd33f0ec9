"""Association maps, per-label score tables and their samplers."""

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from ..core.types import FloatArray, Label, frozen_array

DIED = -1
MISSED = 0


@dataclass(frozen=True)
class AssociationMap:
    """Assignment of each label to died (-1), missed (0) or measurement j >= 1."""

    labels: tuple[Label, ...]
    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.targets):
            raise ValueError("labels and targets must have equal length")

    @property
    def assignment(self) -> dict[Label, int]:
        return dict(zip(self.labels, self.targets, strict=True))

    def __getitem__(self, label: Label) -> int:
        return self.assignment[label]

    def is_valid(self) -> bool:
        """No measurement index is owned by more than one label."""
        used = [t for t in self.targets if t > 0]
        return len(used) == len(set(used))

    def measurement_indices(self) -> frozenset[int]:
        """Zero-based indices of the measurements this map assigns."""
        return frozenset(t - 1 for t in self.targets if t > 0)

    def existing_labels(self) -> frozenset[Label]:
        return frozenset(
            label for label, t in zip(self.labels, self.targets, strict=True) if t >= 0
        )


@dataclass(frozen=True, eq=False)
class PsiTable:
    """Non-negative scores per (label row, assignment column).

    Column 0 is "died / not born", column 1 is "missed", column j + 1 is
    "detected by measurement j" (1-based j). Each row may be stored with a
    positive scale removed; `log_offsets` holds the log of that scale so the
    unscaled score of a row is exp(log_offsets[r]) * scores[r].
    """

    labels: tuple[Label, ...]
    scores: FloatArray
    log_offsets: FloatArray

    def __post_init__(self) -> None:
        scores = np.atleast_2d(np.asarray(self.scores, dtype=np.float64))
        if len(self.labels) == 0:
            scores = scores.reshape(0, max(scores.shape[-1], 2))
        if scores.shape[0] != len(self.labels) or scores.shape[1] < 2:
            raise ValueError("score table must have one row per label and >= 2 columns")
        if np.any(scores < 0) or not np.all(np.isfinite(scores)):
            raise ValueError("scores must be finite and non-negative")
        offsets = np.asarray(self.log_offsets, dtype=np.float64).reshape(-1)
        if offsets.size != len(self.labels):
            raise ValueError("one log offset per row is required")
        object.__setattr__(self, "scores", frozen_array(scores))
        object.__setattr__(self, "log_offsets", frozen_array(offsets))

    @classmethod
    def from_scores(cls, labels: Sequence[Label], scores: np.ndarray) -> "PsiTable":
        return cls(tuple(labels), scores, np.zeros(len(labels)))

    @classmethod
    def from_log_scores(
        cls, labels: Sequence[Label], log_scores: np.ndarray
    ) -> "PsiTable":
        """Build from log scores, removing each row's maximum for stability."""
        log_scores = np.atleast_2d(np.asarray(log_scores, dtype=np.float64))
        row_max = np.max(log_scores, axis=1) if log_scores.size else np.zeros(0)
        offsets = np.where(np.isfinite(row_max), row_max, 0.0)
        with np.errstate(invalid="ignore"):
            scores = np.exp(log_scores - offsets[:, None])
        return cls(tuple(labels), np.nan_to_num(scores, nan=0.0), offsets)

    def log_weight(self, targets: Sequence[int]) -> float:
        """Unscaled log product of the scores picked by an association."""
        if not targets:
            return 0.0
        rows = np.arange(len(targets))
        picked = self.scores[rows, np.asarray(targets) + 1]
        with np.errstate(divide="ignore"):
            return float(np.sum(np.log(picked)) + np.sum(self.log_offsets))

    def to_map(self, targets: Sequence[int]) -> AssociationMap:
        return AssociationMap(self.labels, tuple(int(t) for t in targets))


def iter_valid_targets(psi: PsiTable) -> Iterator[tuple[int, ...]]:
    """Every association with positive score that respects ownership."""
    n = len(psi.labels)
    choices = [
        [int(col) - 1 for col in np.flatnonzero(psi.scores[r] > 0.0)] for r in range(n)
    ]
    current: list[int] = []
    used: set[int] = set()

    def descend(row: int) -> Iterator[tuple[int, ...]]:
        if row == n:
            yield tuple(current)
            return
        for target in choices[row]:
            if target > 0 and target in used:
                continue
            current.append(target)
            if target > 0:
                used.add(target)
            yield from descend(row + 1)
            current.pop()
            used.discard(target)

    yield from descend(0)


def enumerate_associations(psi: PsiTable) -> list[tuple[AssociationMap, float]]:
    """Exact distribution over valid association maps.

    Returns:
        (map, probability) pairs proportional to the product of row scores,
        normalized to sum to one; empty when no valid map has positive score
    """
    targets = list(iter_valid_targets(psi))
    if not targets:
        return []
    log_w = np.array([psi.log_weight(t) for t in targets])
    weights = np.exp(log_w - np.max(log_w))
    weights /= weights.sum()
    return [(psi.to_map(t), float(w)) for t, w in zip(targets, weights, strict=True)]
