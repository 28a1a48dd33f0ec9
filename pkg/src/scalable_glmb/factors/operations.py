"""Marginalization and products of GLMB densities."""

import math
from collections.abc import Iterable
from functools import reduce

from ..core.errors import LabelCollisionError
from ..core.density import truncate
from ..core.hashing import EMPTY_HISTORY, combine_histories, derive_seed
from ..core.types import GlmbComponent, Label, LabeledGlmb, label_key

_TermKey = tuple[tuple[Label, ...], tuple[int, ...]]


def _restrict(component: GlmbComponent, keep: frozenset[Label]) -> GlmbComponent:
    labels = component.labels & keep
    if labels == component.labels:
        return component
    densities = {label: component.densities[label] for label in labels}
    history = component.history_id if labels else EMPTY_HISTORY
    return GlmbComponent(component.weight, history, labels, densities)


def _term_key(component: GlmbComponent) -> _TermKey:
    # Components carrying the very same density objects for the same labels
    # are one mixture term, whatever the histories of the dropped labels were.
    labels = label_key(component.labels)
    return labels, tuple(id(component.densities[label]) for label in labels)


def _distinct_histories(terms: Iterable[GlmbComponent]) -> list[GlmbComponent]:
    """Re-tag terms whose (history, labels) is already held by an earlier term."""
    seen: set[tuple[int, tuple[Label, ...]]] = set()
    result = []
    for n, term in enumerate(terms):
        if term.key in seen:
            salt = derive_seed(0, "marginal-term", n)
            term = GlmbComponent(
                term.weight,
                combine_histories(term.history_id, salt),
                term.labels,
                term.densities,
            )
        seen.add(term.key)
        result.append(term)
    return result


def marginalize(glmb: LabeledGlmb, keep: Iterable[Label]) -> LabeledGlmb:
    """Marginal of a GLMB on a subset of its labels.

    Each component is restricted to its labels in `keep` with the per-label
    densities unchanged. Restricted components carrying the same label set and
    the same density objects are one mixture term and are merged by adding
    weights, which sums the weight function over every subset of the discarded
    labels. Terms whose kept densities differ are never merged, whatever their
    histories. A merged term takes the history of its first component, and a
    term whose (history, labels) is already taken by an earlier term is
    re-tagged so that no term is lost. A fully discarded component keeps the
    empty history, so marginalizing onto no labels gives the unit density.

    Args:
        glmb: Normalized density
        keep: Labels to keep; may include labels outside the universe

    Returns:
        The marginal density, still normalized
    """
    keep = frozenset(keep)
    if glmb.label_universe <= keep:
        return glmb
    merged: dict[_TermKey, GlmbComponent] = {}
    for component in glmb.components:
        restricted = _restrict(component, keep)
        key = _term_key(restricted)
        existing = merged.get(key)
        if existing is None:
            merged[key] = restricted
        else:
            merged[key] = existing.with_weight(existing.weight + restricted.weight)
    return LabeledGlmb(tuple(_distinct_histories(merged.values())))


def marginal_weight(
    glmb: LabeledGlmb, keep: Iterable[Label], labels: Iterable[Label]
) -> float:
    """Total weight of the components whose labels within `keep` equal `labels`."""
    keep = frozenset(keep)
    target = frozenset(labels)
    return math.fsum(c.weight for c in glmb.components if c.labels & keep == target)


def _is_identity(glmb: LabeledGlmb) -> bool:
    if not glmb.is_unit():
        return False
    only = glmb.components[0]
    return only.weight == 1.0 and only.history_id == EMPTY_HISTORY


def multiply(a: LabeledGlmb, b: LabeledGlmb) -> LabeledGlmb:
    """Product of two GLMBs on disjoint label universes.

    Components are paired in every combination: weights multiply, label sets and
    density maps are joined, and histories are combined order-independently.

    Raises:
        LabelCollisionError: If the label universes intersect
    """
    _check_disjoint(a, b)
    if _is_identity(b):
        return a
    if _is_identity(a):
        return b
    product = (_pair(ca, cb) for ca in a.components for cb in b.components)
    return LabeledGlmb.from_components(product)


def multiply_top(a: LabeledGlmb, b: LabeledGlmb, max_components: int) -> LabeledGlmb:
    """The `max_components` heaviest components of `multiply(a, b)`, renormalized.

    With both operands ranked, the pair at ranks (i, j) is outweighed by the
    (i + 1)(j + 1) pairs at ranks (i' <= i, j' <= j), so only pairs with
    (i + 1)(j + 1) <= max_components can make the cut. The number of pairs
    formed is therefore about max_components * log(max_components) whatever
    the operand sizes.

    Raises:
        LabelCollisionError: If the label universes intersect
        ValueError: If max_components is not positive
    """
    if max_components < 1:
        raise ValueError(f"max_components must be positive, got {max_components}")
    _check_disjoint(a, b)
    if _is_identity(b):
        return truncate(a, max_components, 0.0)
    if _is_identity(a):
        return truncate(b, max_components, 0.0)
    left = sorted(a.components, key=GlmbComponent.rank_key)[:max_components]
    right = sorted(b.components, key=GlmbComponent.rank_key)[:max_components]
    product = (
        _pair(ca, cb)
        for i, ca in enumerate(left)
        for cb in right[: max_components // (i + 1)]
    )
    return truncate(LabeledGlmb.from_components(product), max_components, 0.0)


def _check_disjoint(a: LabeledGlmb, b: LabeledGlmb) -> None:
    shared = a.label_universe & b.label_universe
    if shared:
        shown = [str(label) for label in label_key(shared)]
        raise LabelCollisionError(f"cannot multiply densities sharing labels {shown}")


def _pair(ca: GlmbComponent, cb: GlmbComponent) -> GlmbComponent:
    return GlmbComponent(
        ca.weight * cb.weight,
        combine_histories(ca.history_id, cb.history_id),
        ca.labels | cb.labels,
        {**ca.densities, **cb.densities},
    )


def multiply_all(densities: Iterable[LabeledGlmb]) -> LabeledGlmb:
    """Product of any number of label-disjoint densities; unit when none."""
    return reduce(multiply, densities, LabeledGlmb.unit())
