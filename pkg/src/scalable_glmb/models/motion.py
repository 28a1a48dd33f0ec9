"""Constant-velocity motion with constant survival probability."""

from dataclasses import dataclass

import numpy as np

from ..core.types import FloatArray, SingleObjectDensity, frozen_array


@dataclass(frozen=True, eq=False)
class MotionModel:
    """Linear-Gaussian transition f(x'|x) and survival probability P_S."""

    transition_matrix: FloatArray
    process_noise: FloatArray
    survival_prob: float

    def __post_init__(self) -> None:
        if not 0.0 < self.survival_prob <= 1.0:
            msg = f"survival_prob must be in (0, 1], got {self.survival_prob}"
            raise ValueError(msg)
        f = np.asarray(self.transition_matrix, dtype=np.float64)
        q = np.asarray(self.process_noise, dtype=np.float64)
        if f.ndim != 2 or f.shape[0] != f.shape[1] or q.shape != f.shape:
            raise ValueError("transition and process noise must be matching squares")
        if not np.allclose(q, q.T, atol=1e-12):
            raise ValueError("process_noise must be symmetric")
        if np.min(np.linalg.eigvalsh(q)) < -1e-12:
            raise ValueError("process_noise must be positive semi-definite")
        object.__setattr__(self, "transition_matrix", frozen_array(f))
        object.__setattr__(self, "process_noise", frozen_array(q))

    @classmethod
    def constant_velocity(
        cls, dt: float = 1.0, accel_sigma: float = 0.1, survival_prob: float = 0.999
    ) -> "MotionModel":
        """2-D constant velocity over [x, y, vx, vy] with white acceleration noise."""
        f = np.eye(4)
        f[0, 2] = f[1, 3] = dt
        g = np.array([[dt**2 / 2, 0.0], [0.0, dt**2 / 2], [dt, 0.0], [0.0, dt]])
        return cls(f, accel_sigma**2 * g @ g.T, survival_prob)


def predict_density(d: SingleObjectDensity, m: MotionModel) -> SingleObjectDensity:
    """Propagate a Gaussian through the motion model."""
    f = m.transition_matrix
    return SingleObjectDensity(f @ d.mean, f @ d.covariance @ f.T + m.process_noise)
