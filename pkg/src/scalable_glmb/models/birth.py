"""Static and measurement-driven birth models."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from numpy.typing import ArrayLike

from ..core.types import FloatArray, Label, SingleObjectDensity, frozen_array
from .motion import MotionModel, predict_density
from .sensor import SensorModel


class BirthMode(StrEnum):
    STATIC = "static"
    MEASUREMENT_DRIVEN = "measurement_driven"


@dataclass(frozen=True)
class BirthCandidate:
    """A label that may be born this scan, with r_B and p_B."""

    label: Label
    birth_prob: float
    density: SingleObjectDensity

    def __post_init__(self) -> None:
        if not 0.0 < self.birth_prob < 1.0:
            raise ValueError(f"birth_prob must be in (0, 1), got {self.birth_prob}")


@dataclass(frozen=True, eq=False)
class BirthModel:
    """Birth configuration: fixed components or births seeded by measurements."""

    mode: BirthMode = BirthMode.MEASUREMENT_DRIVEN
    static_components: tuple[tuple[float, SingleObjectDensity], ...] = ()
    adaptive_birth_prob: float = 0.02
    adaptive_velocity_cov: FloatArray = field(
        default_factory=lambda: frozen_array(25.0 * np.eye(2))
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", BirthMode(self.mode))
        for r_b, _ in self.static_components:
            if not 0.0 < r_b < 1.0:
                msg = f"static birth probability must be in (0, 1), got {r_b}"
                raise ValueError(msg)
        if not 0.0 < self.adaptive_birth_prob < 1.0:
            raise ValueError("adaptive_birth_prob must be in (0, 1)")
        cov = np.atleast_2d(np.asarray(self.adaptive_velocity_cov, dtype=np.float64))
        if np.min(np.linalg.eigvalsh(0.5 * (cov + cov.T))) < 0.0:
            raise ValueError("adaptive_velocity_cov must be positive semi-definite")
        object.__setattr__(self, "adaptive_velocity_cov", frozen_array(cov))


def static_births(k: int, b: BirthModel) -> list[BirthCandidate]:
    """Candidates (k, i) for each configured static component."""
    return [
        BirthCandidate(Label(k, i), r_b, density)
        for i, (r_b, density) in enumerate(b.static_components)
    ]


def adaptive_births(
    prev_scan_unused: Sequence[ArrayLike] | np.ndarray,
    k: int,
    b: BirthModel,
    s: SensorModel,
    motion: MotionModel | None = None,
) -> list[BirthCandidate]:
    """One birth candidate per measurement left unused by the previous scan.

    The candidate is centred on the measurement with the sensor noise as
    position covariance and a zero-mean velocity. When a motion model is
    given, the density is carried forward one scan to time k, which keeps the
    position mean and inflates its covariance by the velocity uncertainty.

    Labels are (k, 0), (k, 1), ... in input order.
    """
    if b.mode is not BirthMode.MEASUREMENT_DRIVEN:
        raise ValueError("adaptive births require measurement_driven mode")
    measurements = np.asarray(prev_scan_unused, dtype=np.float64).reshape(
        -1, s.measurement_dim
    )
    pos_dim = s.measurement_dim
    vel_cov = b.adaptive_velocity_cov
    state_dim = pos_dim + vel_cov.shape[0]
    candidates = []
    for i, z in enumerate(measurements):
        mean = np.zeros(state_dim)
        mean[:pos_dim] = z
        cov = np.zeros((state_dim, state_dim))
        cov[:pos_dim, :pos_dim] = s.noise_covariance
        cov[pos_dim:, pos_dim:] = vel_cov
        density = SingleObjectDensity(mean, cov)
        if motion is not None:
            density = predict_density(density, motion)
        candidates.append(BirthCandidate(Label(k, i), b.adaptive_birth_prob, density))
    return candidates


def births_for_scan(
    prev_scan_unused: Sequence[ArrayLike] | np.ndarray,
    k: int,
    b: BirthModel,
    s: SensorModel,
    motion: MotionModel | None = None,
) -> list[BirthCandidate]:
    """Birth candidates for scan k under either birth mode."""
    if b.mode is BirthMode.STATIC:
        return static_births(k, b)
    return adaptive_births(prev_scan_unused, k, b, s, motion)
