"""Value types for labeled multi-object densities."""

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import chain
from types import MappingProxyType

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .hashing import EMPTY_HISTORY

FloatArray = NDArray[np.float64]

SYMMETRY_RTOL = 1e-9
PROBABILITY_SUM_TOL = 1e-9


@dataclass(frozen=True, order=True)
class Label:
    """Object label: scan of birth plus an index among objects born that scan."""

    birth_time: int
    birth_index: int

    def __post_init__(self) -> None:
        if self.birth_index < 0:
            msg = f"birth_index must be non-negative, got {self.birth_index}"
            raise ValueError(msg)

    def __str__(self) -> str:
        return f"{self.birth_time}.{self.birth_index}"

    @classmethod
    def parse(cls, text: str) -> "Label":
        """Parse the `birth_time.birth_index` form produced by str()."""
        time_part, _, index_part = text.partition(".")
        if not index_part:
            raise ValueError(f"Invalid label: {text!r}")
        return cls(int(time_part), int(index_part))


def frozen_array(values: ArrayLike) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SingleObjectDensity:
    """Gaussian single-object density over [x, y, vx, vy]."""

    mean: FloatArray
    covariance: FloatArray

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=np.float64).reshape(-1)
        cov = np.array(self.covariance, dtype=np.float64)
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"covariance shape {cov.shape} does not match mean size {mean.size}"
            )
        scale = max(float(np.max(np.abs(cov))), 1.0)
        if not np.allclose(cov, cov.T, rtol=SYMMETRY_RTOL, atol=SYMMETRY_RTOL * scale):
            raise ValueError("covariance must be symmetric")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as e:
            raise ValueError("covariance must be positive definite") from e
        object.__setattr__(self, "mean", frozen_array(mean))
        object.__setattr__(self, "covariance", frozen_array(cov))

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    def allclose(self, other: "SingleObjectDensity", atol: float = 1e-9) -> bool:
        """Compare means and covariances within an absolute tolerance."""
        return bool(
            np.allclose(self.mean, other.mean, rtol=0.0, atol=atol)
            and np.allclose(self.covariance, other.covariance, rtol=0.0, atol=atol)
        )


def label_key(labels: Iterable[Label]) -> tuple[Label, ...]:
    """Canonical sorted tuple for a label set."""
    return tuple(sorted(labels))


@dataclass(frozen=True, eq=False)
class GlmbComponent:
    """One (I, xi) term of a GLMB: weight, history, label set and densities."""

    weight: float
    history_id: int
    labels: frozenset[Label]
    densities: Mapping[Label, SingleObjectDensity]

    def __post_init__(self) -> None:
        if not self.weight >= 0.0:
            msg = f"component weight must be non-negative, got {self.weight}"
            raise ValueError(msg)
        labels = frozenset(self.labels)
        if set(self.densities) != labels:
            raise ValueError("component densities must be keyed exactly by its labels")
        ordered = {label: self.densities[label] for label in sorted(labels)}
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "densities", MappingProxyType(ordered))

    @property
    def key(self) -> tuple[int, tuple[Label, ...]]:
        """Identity used for duplicate merging."""
        return self.history_id, label_key(self.labels)

    @property
    def cardinality(self) -> int:
        return len(self.labels)

    def with_weight(self, weight: float) -> "GlmbComponent":
        return GlmbComponent(weight, self.history_id, self.labels, self.densities)

    def rank_key(self) -> tuple[float, int, tuple[Label, ...]]:
        """Deterministic ordering: weight desc, history asc, label set lexicographic."""
        return -self.weight, self.history_id, label_key(self.labels)


@dataclass(frozen=True, eq=False)
class LabeledGlmb:
    """GLMB density as a list of distinct (history, label set) components."""

    components: tuple[GlmbComponent, ...]
    label_universe: frozenset[Label] = field(init=False)

    def __post_init__(self) -> None:
        components = tuple(self.components)
        seen: set[tuple[int, tuple[Label, ...]]] = set()
        universe: set[Label] = set()
        for component in components:
            if component.key in seen:
                raise ValueError(
                    f"duplicate component for history {component.history_id} and "
                    f"labels {[str(label) for label in label_key(component.labels)]}"
                )
            seen.add(component.key)
            universe.update(component.labels)
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "label_universe", frozenset(universe))

    @classmethod
    def unit(cls) -> "LabeledGlmb":
        """The density of the empty set: one empty component with weight 1."""
        return cls((GlmbComponent(1.0, EMPTY_HISTORY, frozenset(), {}),))

    @classmethod
    def from_components(cls, components: Iterable[GlmbComponent]) -> "LabeledGlmb":
        """Build a density, merging components that share (history, labels)."""
        return cls(merge_duplicates(components))

    @property
    def weights(self) -> FloatArray:
        return np.array([c.weight for c in self.components], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.components)

    def is_unit(self) -> bool:
        return len(self.components) == 1 and not self.components[0].labels


def merge_duplicates(components: Iterable[GlmbComponent]) -> tuple[GlmbComponent, ...]:
    """Merge components sharing (history_id, labels) by adding weights.

    The first occurrence keeps its position and densities.
    """
    merged: dict[tuple[int, tuple[Label, ...]], GlmbComponent] = {}
    for component in components:
        existing = merged.get(component.key)
        if existing is None:
            merged[component.key] = component
        else:
            merged[component.key] = existing.with_weight(
                existing.weight + component.weight
            )
    return tuple(merged.values())


@dataclass(frozen=True, eq=False)
class CardinalityDistribution:
    """Probability of each object count n >= 0."""

    probabilities: FloatArray

    def __post_init__(self) -> None:
        probs = np.array(self.probabilities, dtype=np.float64).reshape(-1)
        if probs.size == 0 or np.any(probs < 0):
            raise ValueError("cardinality probabilities must be non-empty and >= 0")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            msg = f"cardinality probabilities must sum to 1, got {total}"
            raise ValueError(msg)
        object.__setattr__(self, "probabilities", frozen_array(probs))

    def __getitem__(self, n: int) -> float:
        if n < 0:
            raise IndexError(n)
        return float(self.probabilities[n]) if n < self.probabilities.size else 0.0

    @property
    def map_estimate(self) -> int:
        """Most probable cardinality, smallest n on ties."""
        return int(np.argmax(self.probabilities))

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.probabilities.size), self.probabilities))


@dataclass(frozen=True, eq=False)
class Factor:
    """A label group together with the GLMB density over it."""

    label_group: frozenset[Label]
    density: LabeledGlmb

    def __post_init__(self) -> None:
        group = frozenset(self.label_group)
        if not self.density.label_universe <= group:
            raise ValueError("factor density uses labels outside its label group")
        object.__setattr__(self, "label_group", group)


@dataclass(frozen=True, eq=False)
class FactoredGlmb:
    """Product of label-disjoint GLMB factors."""

    factors: tuple[Factor, ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        seen: set[Label] = set()
        for factor in factors:
            if seen & factor.label_group:
                raise ValueError("factor label groups must be pairwise disjoint")
            seen |= factor.label_group
        object.__setattr__(self, "factors", factors)

    @classmethod
    def empty(cls) -> "FactoredGlmb":
        return cls(())

    @classmethod
    def from_densities(cls, densities: Sequence[LabeledGlmb]) -> "FactoredGlmb":
        """One factor per density, each grouped by its own label universe."""
        return cls(tuple(Factor(d.label_universe, d) for d in densities))

    @property
    def label_groups(self) -> list[frozenset[Label]]:
        return [factor.label_group for factor in self.factors]

    @property
    def label_universe(self) -> frozenset[Label]:
        return frozenset(chain.from_iterable(self.label_groups))

    def __len__(self) -> int:
        return len(self.factors)
