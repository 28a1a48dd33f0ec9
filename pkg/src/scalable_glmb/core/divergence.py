"""Kullback-Leibler divergence between small labeled densities by enumeration."""

import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from itertools import combinations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import SupportMismatchError, UniverseTooLargeError
from .types import (
    FactoredGlmb,
    GlmbComponent,
    Label,
    LabeledGlmb,
    SingleObjectDensity,
    label_key,
)

MAX_ENUMERATION_LABELS = 12

LabelSet = tuple[Label, ...]


def gaussian_kld(p: SingleObjectDensity, q: SingleObjectDensity) -> float:
    """KL(p || q) between two Gaussians of the same dimension."""
    if p is q:
        return 0.0
    q_factor = cho_factor(q.covariance)
    diff = q.mean - p.mean
    trace_term = float(np.trace(cho_solve(q_factor, p.covariance)))
    mahalanobis = float(diff @ cho_solve(q_factor, diff))
    logdet_q = 2.0 * float(np.sum(np.log(np.diag(q_factor[0]))))
    _, logdet_p = np.linalg.slogdet(p.covariance)
    return 0.5 * (trace_term + mahalanobis - p.dim + logdet_q - float(logdet_p))


def _moment_match(
    weighted: Sequence[tuple[float, SingleObjectDensity]],
) -> SingleObjectDensity:
    if len(weighted) == 1:
        return weighted[0][1]
    total = math.fsum(w for w, _ in weighted)
    mean = sum(w * d.mean for w, d in weighted) / total
    cov = sum(
        w * (d.covariance + np.outer(d.mean - mean, d.mean - mean)) for w, d in weighted
    ) / total
    return SingleObjectDensity(mean, cov)


class _LabelSetView:
    """Label-set mass and per-label conditional densities of one GLMB."""

    def __init__(self, components: Iterable[GlmbComponent]) -> None:
        self.mass: dict[LabelSet, float] = defaultdict(float)
        self._members: dict[LabelSet, list[GlmbComponent]] = defaultdict(list)
        for component in components:
            key = label_key(component.labels)
            self.mass[key] += component.weight
            if component.weight > 0.0:
                self._members[key].append(component)

    def mass_of(self, labels: LabelSet) -> float:
        return self.mass.get(labels, 0.0)

    def density(self, labels: LabelSet, label: Label) -> SingleObjectDensity:
        members = self._members[labels]
        return _moment_match([(c.weight, c.densities[label]) for c in members])


class _ProductView:
    """Label-set mass and conditional densities of a factored density."""

    def __init__(self, factored: FactoredGlmb) -> None:
        self._groups = [factor.label_group for factor in factored.factors]
        self._views = [_LabelSetView(f.density.components) for f in factored.factors]
        self._owner = {
            label: n for n, group in enumerate(self._groups) for label in group
        }

    def mass_of(self, labels: LabelSet) -> float:
        if any(label not in self._owner for label in labels):
            return 0.0
        mass = 1.0
        for group, view in zip(self._groups, self._views, strict=True):
            mass *= view.mass.get(label_key(set(labels) & group), 0.0)
        return mass

    def density(self, labels: LabelSet, label: Label) -> SingleObjectDensity:
        n = self._owner[label]
        return self._views[n].density(label_key(set(labels) & self._groups[n]), label)


def kld(p: LabeledGlmb, q: LabeledGlmb | FactoredGlmb) -> float:
    """KL divergence D(p || q) between labeled multi-object densities.

    The divergence is the discrete part over label sets plus, for every label
    set, the expected Gaussian divergence between the per-label conditional
    densities (mixtures over histories are moment-matched). Enumerates all
    subsets of the label universe, so the universe is limited in size.

    Raises:
        UniverseTooLargeError: If the combined universe exceeds 12 labels
        SupportMismatchError: If q has zero mass on a label set p supports
    """
    if isinstance(q, FactoredGlmb):
        q_universe = q.label_universe
        q_view: _LabelSetView | _ProductView = _ProductView(q)
    else:
        q_universe = q.label_universe
        q_view = _LabelSetView(q.components)
    universe = label_key(p.label_universe | q_universe)
    if len(universe) > MAX_ENUMERATION_LABELS:
        msg = (
            f"KLD enumeration needs at most {MAX_ENUMERATION_LABELS} labels, "
            f"got {len(universe)}"
        )
        raise UniverseTooLargeError(msg)

    p_view = _LabelSetView(p.components)
    terms: list[float] = []
    for size in range(len(universe) + 1):
        for labels in combinations(universe, size):
            p_mass = p_view.mass_of(labels)
            if p_mass <= 0.0:
                continue
            q_mass = q_view.mass_of(labels)
            if q_mass <= 0.0:
                shown = [str(label) for label in labels]
                raise SupportMismatchError(f"q has no mass on label set {shown}")
            terms.append(p_mass * math.log(p_mass / q_mass))
            for label in labels:
                divergence = gaussian_kld(
                    p_view.density(labels, label), q_view.density(labels, label)
                )
                terms.append(p_mass * divergence)
    return max(math.fsum(terms), 0.0)
