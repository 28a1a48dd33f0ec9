"""Re-grouping a factored density onto a new label partition."""

import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import Executor
from dataclasses import dataclass
from functools import reduce
from typing import TypeVar

from ..core.density import TruncationConfig, truncate
from ..core.errors import PartitionMismatchError
from ..core.hashing import combine_histories, derive_seed
from ..core.types import (
    Factor,
    FactoredGlmb,
    GlmbComponent,
    Label,
    LabeledGlmb,
    label_key,
)
from ..partition.grouping import LabelPartition
from .operations import marginalize, multiply, multiply_top

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class _Piece:
    group_index: int
    labels: frozenset[Label]
    density: LabeledGlmb


def _map(
    fn: Callable[[T], R], items: Sequence[T], executor: Executor | None
) -> list[R]:
    if executor is None:
        return [fn(item) for item in items]
    return list(executor.map(fn, items))


def _salt_histories(glmb: LabeledGlmb, labels: frozenset[Label]) -> LabeledGlmb:
    """Tag histories with the piece's labels so pieces of one factor stay distinct."""
    salt = derive_seed(0, "marginal-piece", label_key(labels))
    return LabeledGlmb(
        tuple(
            GlmbComponent(
                c.weight,
                combine_histories(c.history_id, salt),
                c.labels,
                c.densities,
            )
            for c in glmb.components
        )
    )


def split_factor(factor: Factor, partition: LabelPartition) -> list[_Piece]:
    """Step 1: marginals of one factor on its intersections with the new groups."""
    pieces = []
    for n, group in enumerate(partition.groups):
        shared = factor.label_group & group
        if not shared:
            continue
        if shared == factor.label_group:
            pieces.append(_Piece(n, shared, factor.density))
        else:
            marginal = _salt_histories(marginalize(factor.density, shared), shared)
            pieces.append(_Piece(n, shared, marginal))
    return pieces


def _combine_pieces(
    pieces: Iterable[LabeledGlmb], truncation: TruncationConfig | None
) -> LabeledGlmb:
    """Step 2: product of the pieces landing in one group, truncated.

    With a truncation the product is built pairwise and cut to
    `truncation.max_components` after every pair, so it never holds more
    components than that.
    """
    if truncation is None:
        return reduce(multiply, pieces, LabeledGlmb.unit())
    cap = truncation.max_components
    product = reduce(
        lambda acc, piece: multiply_top(acc, piece, cap), pieces, LabeledGlmb.unit()
    )
    return truncate(product, cap, truncation.min_weight)


def refactor(
    current: FactoredGlmb,
    new_partition: LabelPartition,
    truncation: TruncationConfig | None = None,
    executor: Executor | None = None,
) -> FactoredGlmb:
    """Re-express a factored density over the groups of a new partition.

    Every factor is marginalized onto its intersection with each new group;
    then the pieces falling into a group are multiplied together and the
    product is truncated. A factor whose labels all fall into one group is
    carried over unchanged, so refactoring onto the current grouping is a
    no-op apart from truncation.

    Args:
        current: Factored density to regroup
        new_partition: Partition covering exactly the labels of `current`
        truncation: Per-factor truncation, or None to keep every component
        executor: Optional executor; step 1 maps over old factors and step 2
            over new groups

    Returns:
        Factored density with one factor per new group, in partition order

    Raises:
        PartitionMismatchError: If the partition and the density cover
            different labels
    """
    covered, expected = new_partition.labels, current.label_universe
    if covered != expected:
        missing = [str(label) for label in label_key(expected - covered)]
        extra = [str(label) for label in label_key(covered - expected)]
        msg = f"partition does not match the factored labels: missing {missing}, "
        msg += f"extra {extra}"
        raise PartitionMismatchError(msg)

    factors = [factor for factor in current.factors if factor.label_group]
    split = _map(lambda f: split_factor(f, new_partition), factors, executor)
    per_group: list[list[LabeledGlmb]] = [[] for _ in new_partition.groups]
    for pieces in split:
        for piece in pieces:
            per_group[piece.group_index].append(piece.density)

    products = _map(lambda ps: _combine_pieces(ps, truncation), per_group, executor)
    logger.debug(
        "Refactored %d factors into %d groups (%d components)",
        len(factors),
        len(new_partition),
        sum(len(p) for p in products),
    )
    return FactoredGlmb(
        tuple(
            Factor(group, density)
            for group, density in zip(new_partition.groups, products, strict=True)
        )
    )
