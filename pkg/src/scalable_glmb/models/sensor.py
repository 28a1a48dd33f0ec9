"""Linear position sensor, detection probability and uniform clutter."""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..core.errors import SingularInnovationError
from ..core.types import FloatArray, SingleObjectDensity, frozen_array


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in metres."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("region must have positive area")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains(self, points: ArrayLike) -> np.ndarray:
        """Boolean mask of the (N, 2) points lying inside the closed rectangle."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return (
            (pts[:, 0] >= self.x_min)
            & (pts[:, 0] <= self.x_max)
            & (pts[:, 1] >= self.y_min)
            & (pts[:, 1] <= self.y_max)
        )


@dataclass(frozen=True)
class ClutterIntensity:
    """Uniform Poisson clutter intensity kappa(z) over a region."""

    clutter_rate: float
    region: Region

    @property
    def density(self) -> float:
        return self.clutter_rate / self.region.area

    def __call__(self, z: ArrayLike) -> FloatArray:
        inside = self.region.contains(z)
        return np.where(inside, self.density, 0.0)

    def total(self) -> float:
        """Integral of the intensity over the region."""
        return self.density * self.region.area


@dataclass(frozen=True, eq=False)
class SensorModel:
    """Observation matrix, noise, detection probability and clutter."""

    observation_matrix: FloatArray
    noise_covariance: FloatArray
    detection_prob: float
    clutter_rate: float
    surveillance_region: Region

    def __post_init__(self) -> None:
        if not 0.0 <= self.detection_prob <= 1.0:
            msg = f"detection_prob must be in [0, 1], got {self.detection_prob}"
            raise ValueError(msg)
        if self.clutter_rate < 0.0:
            raise ValueError(f"clutter_rate must be >= 0, got {self.clutter_rate}")
        h = np.atleast_2d(np.asarray(self.observation_matrix, dtype=np.float64))
        r = np.atleast_2d(np.asarray(self.noise_covariance, dtype=np.float64))
        if r.shape != (h.shape[0], h.shape[0]):
            raise ValueError("noise covariance must match the measurement dimension")
        try:
            np.linalg.cholesky(r)
        except np.linalg.LinAlgError as e:
            raise ValueError("noise covariance must be positive definite") from e
        object.__setattr__(self, "observation_matrix", frozen_array(h))
        object.__setattr__(self, "noise_covariance", frozen_array(r))

    @classmethod
    def position_sensor(
        cls,
        noise_sigma: float,
        detection_prob: float,
        clutter_rate: float,
        region: Region,
    ) -> "SensorModel":
        """Sensor observing [x, y] of a [x, y, vx, vy] state."""
        h = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
        return cls(h, noise_sigma**2 * np.eye(2), detection_prob, clutter_rate, region)

    @property
    def measurement_dim(self) -> int:
        return int(self.observation_matrix.shape[0])

    @property
    def clutter(self) -> ClutterIntensity:
        return ClutterIntensity(self.clutter_rate, self.surveillance_region)

    def predicted_measurement(
        self, d: SingleObjectDensity
    ) -> tuple[FloatArray, FloatArray]:
        """Mean H m and innovation covariance H P H' + R."""
        h = self.observation_matrix
        return h @ d.mean, h @ d.covariance @ h.T + self.noise_covariance


def measurement_likelihood(
    d: SingleObjectDensity, z: ArrayLike, s: SensorModel
) -> tuple[float, SingleObjectDensity]:
    """Kalman update of a Gaussian with one measurement.

    Returns:
        Tuple of (marginal likelihood <g(z|.), p>, conditioned density)

    Raises:
        SingularInnovationError: If the innovation covariance is not invertible
    """
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    h = s.observation_matrix
    z_pred, innovation_cov = s.predicted_measurement(d)
    try:
        factor = cho_factor(innovation_cov)
    except LinAlgError as e:
        raise SingularInnovationError("innovation covariance is not invertible") from e

    nu = z - z_pred
    ph_t = d.covariance @ h.T
    gain = cho_solve(factor, ph_t.T).T
    logdet = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    maha = float(nu @ cho_solve(factor, nu))
    likelihood = math.exp(-0.5 * (maha + logdet + z.size * math.log(2.0 * math.pi)))

    i_kh = np.eye(d.dim) - gain @ h
    cov = i_kh @ d.covariance @ i_kh.T + gain @ s.noise_covariance @ gain.T
    return likelihood, SingleObjectDensity(d.mean + gain @ nu, cov)
