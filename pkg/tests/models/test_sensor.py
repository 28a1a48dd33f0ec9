"""Tests for the position sensor, clutter and the Kalman update."""

import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.stats import multivariate_normal

from scalable_glmb.core.types import SingleObjectDensity
from scalable_glmb.models.sensor import (
    Region,
    SensorModel,
    measurement_likelihood,
)
from tests.helpers import gaussian

REGION = Region(0.0, 100.0, 0.0, 50.0)


def test_region_contains_is_closed() -> None:
    """Test that boundary points are inside and outside points are not."""
    mask = REGION.contains([[0, 0], [100, 50], [100.1, 10], [50, -1]])
    assert mask.tolist() == [True, True, False, False]


def test_region_requires_positive_area() -> None:
    """Test that a degenerate region is rejected."""
    with pytest.raises(ValueError, match="positive area"):
        Region(0.0, 0.0, 0.0, 1.0)


def test_clutter_intensity_is_uniform() -> None:
    """Test kappa equals rate over area inside and zero outside."""
    sensor = SensorModel.position_sensor(1.0, 0.9, 20.0, REGION)
    values = sensor.clutter([[10, 10], [200, 10]])
    assert values[0] == pytest.approx(20.0 / 5000.0)
    assert values[1] == 0.0
    assert sensor.clutter.total() == pytest.approx(20.0)


def test_sensor_rejects_bad_detection_prob() -> None:
    """Test that P_D outside [0, 1] is rejected."""
    with pytest.raises(ValueError, match="detection_prob"):
        SensorModel.position_sensor(1.0, 1.5, 0.0, REGION)


def test_likelihood_matches_scipy() -> None:
    """Test the marginal likelihood against a Gaussian pdf of the innovation."""
    sensor = SensorModel.position_sensor(0.5, 0.9, 0.0, REGION)
    prior = gaussian(10, 20, 1, 0, var=2.0)
    z = np.array([10.7, 19.4])
    likelihood, _ = measurement_likelihood(prior, z, sensor)
    expected = multivariate_normal.pdf(z, mean=[10, 20], cov=2.25 * np.eye(2))
    assert likelihood == pytest.approx(expected, rel=1e-9)


def test_update_pulls_mean_towards_measurement() -> None:
    """Test the posterior position for equal prior and noise variances."""
    sensor = SensorModel.position_sensor(1.0, 0.9, 0.0, REGION)
    _, posterior = measurement_likelihood(gaussian(0, 0), [2.0, -2.0], sensor)
    np.testing.assert_allclose(posterior.mean, [1.0, -1.0, 0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(np.diag(posterior.covariance)[:2], [0.5, 0.5])


def _correlated_prior() -> SingleObjectDensity:
    cov = np.array(
        [
            [2.0, 0.5, 0.3, 0.0],
            [0.5, 1.0, 0.0, 0.1],
            [0.3, 0.0, 1.0, 0.0],
            [0.0, 0.1, 0.0, 1.0],
        ]
    )
    return SingleObjectDensity(np.array([3.0, -1.0, 0.5, 0.2]), cov)


def test_likelihood_matches_quadrature() -> None:
    """Test the likelihood and posterior mean against numerical integration."""
    sensor = SensorModel.position_sensor(0.5, 0.9, 0.0, REGION)
    prior = _correlated_prior()
    z = np.array([3.8, -1.6])
    position = multivariate_normal(prior.mean[:2], prior.covariance[:2, :2])
    noise = multivariate_normal(np.zeros(2), sensor.noise_covariance)

    def joint(y: float, x: float) -> float:
        p = np.array([x, y])
        return float(noise.pdf(z - p) * position.pdf(p))

    def weighted(y: float, x: float) -> float:
        return x * joint(y, x)

    bounds = (-12.0, 18.0, -10.0, 8.0)
    expected, _ = dblquad(joint, *bounds, epsabs=1e-13, epsrel=1e-10)
    first_moment, _ = dblquad(weighted, *bounds, epsabs=1e-13, epsrel=1e-10)

    likelihood, posterior = measurement_likelihood(prior, z, sensor)
    assert likelihood == pytest.approx(expected, rel=1e-6)
    assert posterior.mean[0] == pytest.approx(first_moment / expected, rel=1e-6)


def test_uninformative_measurement_leaves_prior() -> None:
    """Test that very large noise leaves the prior unchanged."""
    sensor = SensorModel.position_sensor(1e4, 0.9, 0.0, REGION)
    prior = _correlated_prior()
    z = np.array([13.0, 9.0])
    likelihood, posterior = measurement_likelihood(prior, z, sensor)
    np.testing.assert_allclose(posterior.mean, prior.mean, atol=1e-6)
    np.testing.assert_allclose(posterior.covariance, prior.covariance, atol=1e-6)
    expected = multivariate_normal.pdf(z, mean=prior.mean[:2], cov=1e8 * np.eye(2))
    assert likelihood == pytest.approx(expected, rel=1e-6)
