"""Builders shared by the test modules."""

from collections.abc import Mapping, Sequence

import numpy as np

from scalable_glmb.core.types import (
    GlmbComponent,
    Label,
    LabeledGlmb,
    SingleObjectDensity,
)
from scalable_glmb.factors.operations import multiply_all
from scalable_glmb.metrics.tracks import Track
from scalable_glmb.models.config import ModelConfig, ModelSet
from scalable_glmb.models.sensor import Region


def gaussian(
    x: float, y: float, vx: float = 0.0, vy: float = 0.0, var: float = 1.0
) -> SingleObjectDensity:
    return SingleObjectDensity(np.array([x, y, vx, vy]), var * np.eye(4))


def component(
    weight: float, history: int, densities: Mapping[Label, SingleObjectDensity]
) -> GlmbComponent:
    return GlmbComponent(weight, history, frozenset(densities), dict(densities))


def labels(*pairs: tuple[int, int]) -> list[Label]:
    return [Label(t, i) for t, i in pairs]


def random_glmb(
    rng: np.random.Generator,
    universe: Sequence[Label],
    n_components: int,
    history_base: int = 1,
) -> LabeledGlmb:
    """Random normalized GLMB; each label uses one density object throughout."""
    shared = {
        label: gaussian(*rng.normal(0.0, 10.0, size=2), var=float(rng.uniform(0.5, 2)))
        for label in universe
    }
    weights = rng.dirichlet(np.ones(n_components))
    components = []
    for n, w in enumerate(weights):
        chosen = [label for label in universe if rng.random() < 0.5]
        densities = {label: shared[label] for label in chosen}
        components.append(component(float(w), history_base + n, densities))
    return LabeledGlmb.from_components(components)


def history_glmb(
    rng: np.random.Generator,
    universe: Sequence[Label],
    n_histories: int,
    history_base: int = 1,
) -> LabeledGlmb:
    """Random normalized GLMB whose histories each hold their own densities.

    Every history has one to three components with different label sets that
    share the history's density objects.
    """
    components = []
    for n in range(n_histories):
        own = {label: gaussian(*rng.normal(0.0, 10.0, size=2)) for label in universe}
        for _ in range(int(rng.integers(1, 4))):
            chosen = [label for label in universe if rng.random() < 0.5]
            densities = {label: own[label] for label in chosen}
            weight = float(rng.random())
            components.append(component(weight, history_base + n, densities))
    glmb = LabeledGlmb.from_components(components)
    total = float(glmb.weights.sum())
    return LabeledGlmb(tuple(c.with_weight(c.weight / total) for c in glmb.components))


def independent_glmb(
    rng: np.random.Generator, groups: Sequence[Sequence[Label]], n_components: int
) -> tuple[LabeledGlmb, list[LabeledGlmb]]:
    """Product of random per-group GLMBs, plus the group factors."""
    factors = [
        random_glmb(rng, group, n_components, history_base=1000 * (n + 1))
        for n, group in enumerate(groups)
    ]
    return multiply_all(factors), factors


TermKey = tuple[tuple[Label, ...], tuple[int, ...]]


def canonical(glmb: LabeledGlmb) -> dict[TermKey, float]:
    """Total weight per (label set, density objects) term."""
    out: dict[TermKey, float] = {}
    for c in glmb.components:
        key_labels = tuple(sorted(c.labels))
        key = (key_labels, tuple(id(c.densities[label]) for label in key_labels))
        out[key] = out.get(key, 0.0) + c.weight
    return out


def model_set(
    detection_prob: float = 0.9,
    clutter_rate: float = 0.0,
    noise_sigma: float = 0.15,
    region: Region | None = None,
    birth_prob: float = 0.02,
) -> ModelSet:
    cfg = ModelConfig(
        detection_prob=detection_prob,
        clutter_rate=clutter_rate,
        noise_sigma=noise_sigma,
        birth_prob=birth_prob,
    )
    return ModelSet.from_config(cfg, region or Region(0.0, 1000.0, 0.0, 1000.0))


def random_tracks(
    rng: np.random.Generator, count: int, horizon: int = 30, extent: float = 20.0
) -> list[Track]:
    """Random-walk tracks with random spans inside [1, horizon]."""
    tracks = []
    for n in range(count):
        start = int(rng.integers(1, horizon))
        end = int(rng.integers(start, horizon + 1))
        times = np.arange(start, end + 1)
        origin = rng.uniform(0.0, extent, size=2)
        steps = rng.normal(0.0, 0.5, size=(times.size, 2))
        positions = origin + np.cumsum(steps, axis=0)
        velocities = np.zeros_like(positions)
        tracks.append(Track(f"t{n}", times, np.hstack([positions, velocities])))
    return tracks
