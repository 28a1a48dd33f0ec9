"""Weight bookkeeping and estimation for GLMB densities."""

import math
from collections import defaultdict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import AllZeroWeightsError
from .types import (
    CardinalityDistribution,
    FloatArray,
    GlmbComponent,
    Label,
    LabeledGlmb,
)


class TruncationConfig(BaseModel):
    """Component cap and weight floor applied after every update."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_components: int = Field(default=100, ge=1)
    min_weight: float = Field(default=1e-5, ge=0.0, lt=1.0)


def normalize(glmb: LabeledGlmb) -> LabeledGlmb:
    """Scale component weights so they sum to one.

    Args:
        glmb: Density with at least one positive weight

    Returns:
        Density with the same components, in the same order, normalized

    Raises:
        AllZeroWeightsError: If every weight is zero
    """
    total = math.fsum(c.weight for c in glmb.components)
    if not total > 0.0:
        msg = f"Cannot normalize a density whose {len(glmb)} weights are all zero"
        raise AllZeroWeightsError(msg)
    return LabeledGlmb(tuple(c.with_weight(c.weight / total) for c in glmb.components))


def truncate(glmb: LabeledGlmb, max_components: int, min_weight: float) -> LabeledGlmb:
    """Keep the highest-weight components and renormalize.

    Components are ranked by (weight desc, history_id asc, label set). The top
    `max_components` are kept, then those below `min_weight` are dropped; the
    best component always survives. If nothing is dropped the input is
    returned unchanged, which makes the operation idempotent.

    Raises:
        AllZeroWeightsError: If the kept components all have zero weight
    """
    if max_components < 1:
        raise ValueError(f"max_components must be positive, got {max_components}")
    ranked = sorted(glmb.components, key=GlmbComponent.rank_key)
    kept = [
        c
        for rank, c in enumerate(ranked[:max_components])
        if rank == 0 or c.weight >= min_weight
    ]
    if len(kept) == len(glmb.components):
        return glmb
    return normalize(LabeledGlmb(tuple(kept)))


def cardinality(glmb: LabeledGlmb) -> CardinalityDistribution:
    """Distribution of the number of objects."""
    n_max = max((c.cardinality for c in glmb.components), default=0)
    probs = np.zeros(n_max + 1)
    for component in glmb.components:
        probs[component.cardinality] += component.weight
    return CardinalityDistribution(probs)


def best_component(glmb: LabeledGlmb, n: int | None = None) -> GlmbComponent | None:
    """Highest-ranked component, optionally restricted to cardinality n."""
    candidates = [c for c in glmb.components if n is None or c.cardinality == n]
    return min(candidates, key=GlmbComponent.rank_key) if candidates else None


def extract_estimates(glmb: LabeledGlmb) -> dict[Label, FloatArray]:
    """MAP-cardinality estimate of the labeled object states.

    Picks the most probable cardinality n*, then the best component of that
    cardinality, and returns the means of its per-label densities.
    """
    n_star = cardinality(glmb).map_estimate
    component = best_component(glmb, n_star)
    if component is None or n_star == 0:
        return {}
    return {label: d.mean.copy() for label, d in component.densities.items()}


def existence_probabilities(glmb: LabeledGlmb) -> dict[Label, float]:
    """Probability that each label of the universe exists."""
    existence: dict[Label, float] = defaultdict(float)
    for component in glmb.components:
        for label in component.labels:
            existence[label] += component.weight
    return {label: existence[label] for label in sorted(existence)}
