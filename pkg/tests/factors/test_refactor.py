"""Tests for re-grouping a factored density onto a new partition."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from scalable_glmb.core.density import TruncationConfig, truncate
from scalable_glmb.core.divergence import kld
from scalable_glmb.core.errors import PartitionMismatchError
from scalable_glmb.core.types import Factor, FactoredGlmb, LabeledGlmb
from scalable_glmb.factors.operations import marginalize, multiply_all
from scalable_glmb.factors.refactor import refactor
from scalable_glmb.partition.grouping import LabelPartition
from tests.helpers import canonical, component, gaussian, labels, random_glmb

A, B, C, D = labels((1, 0), (1, 1), (2, 0), (2, 1))


def _partition(*groups: list) -> LabelPartition:
    return LabelPartition(tuple(frozenset(g) for g in groups), 0.99)


def _factored(seed: int) -> FactoredGlmb:
    rng = np.random.default_rng(seed)
    return FactoredGlmb(
        (
            Factor(frozenset({A, B}), random_glmb(rng, [A, B], 6, history_base=10)),
            Factor(frozenset({C, D}), random_glmb(rng, [C, D], 6, history_base=100)),
        )
    )


def _same_terms(a, b) -> None:
    left, right = canonical(a), canonical(b)
    assert left.keys() == right.keys()
    for key, weight in left.items():
        assert right[key] == pytest.approx(weight, abs=1e-12)


def test_same_grouping_is_a_no_op() -> None:
    """Test that refactoring onto the current groups keeps the densities."""
    current = _factored(0)
    result = refactor(current, _partition(*current.label_groups))
    for before, after in zip(current.factors, result.factors, strict=True):
        assert after.density is before.density


def test_merge_two_factors_is_their_product() -> None:
    """Test that one group over both factors holds their product."""
    current = _factored(1)
    result = refactor(current, _partition([A, B, C, D]))
    assert len(result) == 1
    expected = multiply_all(f.density for f in current.factors)
    _same_terms(result.factors[0].density, expected)


def test_split_gives_marginals() -> None:
    """Test that splitting a factor yields its marginals."""
    current = _factored(2)
    result = refactor(current, _partition([A], [B], [C, D]))
    joint = current.factors[0].density
    _same_terms(result.factors[0].density, marginalize(joint, [A]))
    _same_terms(result.factors[1].density, marginalize(joint, [B]))
    assert result.factors[2].density is current.factors[1].density


def test_crossing_partition_matches_marginal_products() -> None:
    """Test a regrouping that cuts across both old factors."""
    current = _factored(3)
    result = refactor(current, _partition([A, C], [B, D]))
    joint = multiply_all(f.density for f in current.factors)
    for factor in result.factors:
        _same_terms(factor.density, marginalize(joint, factor.label_group))
    assert kld(joint, result) >= 0.0


def test_truncation_bounds_each_factor() -> None:
    """Test that each new factor respects the component cap."""
    current = _factored(4)
    truncation = TruncationConfig(max_components=5, min_weight=0.0)
    result = refactor(current, _partition([A, B, C, D]), truncation)
    assert len(result.factors[0].density) <= 5
    assert result.factors[0].density.weights.sum() == pytest.approx(1.0)


def test_executor_gives_same_result() -> None:
    """Test that a thread pool changes nothing about the result."""
    current = _factored(5)
    partition = _partition([A, C], [B], [D])
    serial = refactor(current, partition)
    with ThreadPoolExecutor(max_workers=3) as pool:
        parallel = refactor(current, partition, executor=pool)
    for s, p in zip(serial.factors, parallel.factors, strict=True):
        assert s.label_group == p.label_group
        _same_terms(s.density, p.density)


def test_partition_mismatch() -> None:
    """Test that a partition over other labels is rejected."""
    current = _factored(6)
    with pytest.raises(PartitionMismatchError, match="missing"):
        refactor(current, _partition([A, B], [C]))


def _singletons(seed: int, count: int) -> FactoredGlmb:
    """Single-label factors of three to five components each."""
    rng = np.random.default_rng(seed)
    factors = []
    for n, label in enumerate(labels(*((3, i) for i in range(count)))):
        density = gaussian(*rng.normal(0.0, 10.0, size=2))
        weights = rng.dirichlet(np.ones(int(rng.integers(3, 6))))
        components = [
            component(float(w), 100 * (n + 1) + k, {label: density} if k % 2 else {})
            for k, w in enumerate(weights)
        ]
        factors.append(Factor(frozenset({label}), LabeledGlmb(tuple(components))))
    return FactoredGlmb(tuple(factors))


@pytest.mark.timeout(30)
def test_merging_many_pieces_stays_bounded() -> None:
    """Test that a dozen merged factors never exceed the component cap."""
    current = _singletons(7, 12)
    assert len(current) == 12
    truncation = TruncationConfig(max_components=20, min_weight=0.0)
    result = refactor(current, _partition(current.label_universe), truncation)
    (factor,) = result.factors
    assert len(factor.density) <= 20
    assert factor.density.weights.sum() == pytest.approx(1.0)


def test_bounded_merge_keeps_heaviest_product_terms() -> None:
    """Test that capped merging keeps the top terms of the full product."""
    current = _singletons(8, 6)
    truncation = TruncationConfig(max_components=20, min_weight=0.0)
    result = refactor(current, _partition(current.label_universe), truncation)
    full = multiply_all(f.density for f in current.factors)
    expected = {c.key: c.weight for c in truncate(full, 20, 0.0).components}
    got = {c.key: c.weight for c in result.factors[0].density.components}
    assert got.keys() == expected.keys()
    for key, weight in expected.items():
        assert got[key] == pytest.approx(weight, abs=1e-12)
