"""Tests for the sparse OSPA2 pipeline against the dense one."""

import numpy as np
import pytest

from scalable_glmb.metrics.config import MetricConfig, WindowSpec
from scalable_glmb.metrics.ospa import ospa2, track_distance
from scalable_glmb.metrics.sparse import (
    assignable_pairs,
    ospa2_sparse,
    sparse_assignment,
)
from scalable_glmb.metrics.tracks import Track
from scalable_glmb.metrics.windowed import EvaluationMethod, ospa2_windowed
from tests.helpers import random_tracks


def test_assignable_pairs_are_complete(rng: np.random.Generator) -> None:
    """Test that every pair closer than the cutoff is found."""
    xs, ys = random_tracks(rng, 15), random_tracks(rng, 15)
    found = {(i, j) for i, j, _ in assignable_pairs(xs, ys, 2.0)}
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            close = track_distance(x, y, 2.0) < 2.0
            assert ((i, j) in found) == close


@pytest.mark.parametrize("order", [1.0, 2.0])
def test_sparse_equals_dense(rng: np.random.Generator, order: float) -> None:
    """Test OSPA2 from the sparse graph against the dense assignment."""
    cfg = MetricConfig(cutoff=2.0, order=order)
    for m, n in [(10, 10), (6, 14), (14, 3)]:
        xs, ys = random_tracks(rng, m), random_tracks(rng, n)
        assert ospa2_sparse(xs, ys, cfg) == pytest.approx(ospa2(xs, ys, cfg), abs=1e-9)


def test_sparse_with_empty_tracks() -> None:
    """Test that empty tracks on both sides pair at distance 0."""
    empty = Track("e", np.zeros(0, dtype=np.int64), np.zeros((0, 4)))
    full = Track("f", np.array([1]), np.array([[0.0, 0.0, 0.0, 0.0]]))
    cfg = MetricConfig()
    xs, ys = [empty, full], [empty]
    assert ospa2_sparse(xs, ys, cfg) == pytest.approx(ospa2(xs, ys, cfg))


def test_sparse_assignment_all_saturated() -> None:
    """Test that no candidate pairs cost c^p per column."""
    assert sparse_assignment([], 3, 5, 2.0, 1.0) == 10.0


def test_sparse_assignment_prefers_saturation_over_bad_pairs() -> None:
    """Test a row whose best choice is its cheap pair."""
    pairs = [(0, 0, 0.5), (1, 0, 0.1)]
    # row 1 takes column 0, row 0 and column 1 are saturated
    assert sparse_assignment(pairs, 2, 2, 2.0, 1.0) == pytest.approx(0.1 + 2.0)


def test_far_apart_sets_are_saturated() -> None:
    """Test two well separated sets give the cutoff."""
    xs = [Track("x", np.arange(1, 5), np.zeros((4, 4)))]
    ys = [Track("y", np.arange(1, 5), np.full((4, 4), 100.0))]
    cfg = MetricConfig()
    assert assignable_pairs(xs, ys, 2.0) == []
    assert ospa2_sparse(xs, ys, cfg) == 2.0


@pytest.mark.slow
@pytest.mark.timeout(600)
def test_sparse_equals_dense_on_random_sizes(rng: np.random.Generator) -> None:
    """Test sparse against dense OSPA2 on 50 track sets of up to 200 tracks."""
    cfg = MetricConfig(cutoff=2.0, order=1.0)
    for _ in range(50):
        m, n = rng.integers(1, 201, size=2)
        extent = float(rng.uniform(10.0, 200.0))
        xs = random_tracks(rng, int(m), extent=extent)
        ys = random_tracks(rng, int(n), extent=extent)
        assert ospa2_sparse(xs, ys, cfg) == pytest.approx(
            ospa2(xs, ys, cfg), abs=1e-12
        )


@pytest.mark.slow
@pytest.mark.timeout(120)
def test_windowed_series_on_ten_thousand_tracks(rng: np.random.Generator) -> None:
    """Test a full sparse windowed series on 10,000 separated tracks."""
    side, horizon = 100, 20
    times = np.arange(1, horizon + 1)
    xs, ys = [], []
    for n in range(side * side):
        row, col = divmod(n, side)
        states = np.zeros((horizon, 4))
        states[:, 0] = 10.0 * col + 0.5 * (times - 1)
        states[:, 1] = 10.0 * row
        states[:, 2] = 0.5
        xs.append(Track(f"x{n}", times, states))
        if rng.random() < 0.95:
            noisy = states.copy()
            noisy[:, :2] += rng.normal(0.0, 0.3, size=(horizon, 2))
            ys.append(Track(f"y{n}", times, noisy))

    series = ospa2_windowed(
        xs,
        ys,
        MetricConfig(cutoff=2.0, order=1.0),
        WindowSpec(length=10),
        (1, horizon),
        EvaluationMethod.SPARSE,
    )
    assert [k for k, _ in series] == list(range(1, horizon + 1))
    assert all(0.0 <= value < 1.0 for _, value in series)
