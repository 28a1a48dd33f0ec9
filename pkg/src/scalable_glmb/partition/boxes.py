"""Measurement-space bounding boxes of label densities."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from ..core.types import FloatArray, Label, SingleObjectDensity, frozen_array
from ..models.sensor import SensorModel


@dataclass(frozen=True, eq=False)
class BoundingBox:
    """Axis-aligned box in measurement space, closed on every side."""

    label: Label
    min_corner: FloatArray
    max_corner: FloatArray

    def __post_init__(self) -> None:
        lo = np.asarray(self.min_corner, dtype=np.float64).reshape(-1)
        hi = np.asarray(self.max_corner, dtype=np.float64).reshape(-1)
        if lo.shape != hi.shape:
            raise ValueError("box corners must have the same dimension")
        if np.any(lo > hi):
            raise ValueError(f"box for {self.label} has min_corner > max_corner")
        object.__setattr__(self, "min_corner", frozen_array(lo))
        object.__setattr__(self, "max_corner", frozen_array(hi))

    @property
    def dim(self) -> int:
        return int(self.min_corner.size)

    @property
    def center(self) -> FloatArray:
        return 0.5 * (self.min_corner + self.max_corner)

    @property
    def half_widths(self) -> FloatArray:
        return 0.5 * (self.max_corner - self.min_corner)

    def overlaps(self, other: "BoundingBox") -> bool:
        """Closed-interval intersection on every axis."""
        return bool(
            np.all(self.min_corner <= other.max_corner)
            and np.all(other.min_corner <= self.max_corner)
        )

    def contains(self, point: FloatArray) -> bool:
        inside = (self.min_corner <= point) & (point <= self.max_corner)
        return bool(np.all(inside))

    def coordinates(self) -> tuple[float, ...]:
        """Interleaved (min..., max...) tuple as used by the R-tree index."""
        return (*self.min_corner.tolist(), *self.max_corner.tolist())


def gate_scale(gate_prob: float, dim: int) -> float:
    """Number of standard deviations per axis for a chi-square gate."""
    if not 0.0 < gate_prob < 1.0:
        raise ValueError(f"gate_prob must be in (0, 1), got {gate_prob}")
    return math.sqrt(float(chi2.ppf(gate_prob, dim)))


def project_box(
    label: Label,
    marginal: SingleObjectDensity,
    sensor: SensorModel,
    gate_prob: float,
) -> BoundingBox:
    """Box around the predicted measurement of a label.

    The half-width on axis i is sqrt(chi2_quantile(gate_prob, dim)) * sqrt(S_ii),
    where S is the innovation covariance H P H' + R.

    Args:
        label: Label the box belongs to
        marginal: Single-object density of the label
        sensor: Sensor giving H and R
        gate_prob: Gate probability in (0, 1)

    Returns:
        The bounding box centred on H * mean
    """
    z_pred, innovation_cov = sensor.predicted_measurement(marginal)
    half = gate_scale(gate_prob, sensor.measurement_dim) * np.sqrt(
        np.diag(innovation_cov)
    )
    return BoundingBox(label, z_pred - half, z_pred + half)


def rescale_box(
    box: BoundingBox, old_gate_prob: float, new_gate_prob: float
) -> BoundingBox:
    """The box project_box would give at a different gate probability."""
    factor = gate_scale(new_gate_prob, box.dim) / gate_scale(old_gate_prob, box.dim)
    half = box.half_widths * factor
    return BoundingBox(box.label, box.center - half, box.center + half)
