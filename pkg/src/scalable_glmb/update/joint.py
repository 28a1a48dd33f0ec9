"""Joint prediction and measurement update of one label group.

Each prior component is expanded into posterior components, one per valid
association of its surviving labels and the birth candidates with the
measurements routed to the group. The score of an association is the product
of per-label table entries, so the posterior weight of a child component is
its parent's weight times that product, normalized over all children.
"""

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import logsumexp

from ..core.density import truncate
from ..core.errors import (
    AllZeroWeightsError,
    ProblemTooLargeError,
    SingularInnovationError,
)
from ..core.hashing import extend_history
from ..core.types import (
    FloatArray,
    GlmbComponent,
    Label,
    LabeledGlmb,
    SingleObjectDensity,
)
from ..models.birth import BirthCandidate
from ..models.motion import MotionModel, predict_density
from ..models.sensor import SensorModel, measurement_likelihood
from .association import AssociationMap, PsiTable, iter_valid_targets
from .config import UpdateConfig
from .sampler import gibbs_sample

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_LABELS = 6
MAX_EXHAUSTIVE_MEASUREMENTS = 6

# Lower bound on the clutter intensity inside the surveillance region, so a
# clutter-free sensor still gives finite log scores.
KAPPA_FLOOR = 1e-300


@dataclass(frozen=True)
class UpdateResult:
    """Posterior of a group plus the measurements its best component used."""

    posterior: LabeledGlmb
    used_measurements: frozenset[int]


class _Prediction:
    """Predicted density of one row with lazily computed measurement updates."""

    def __init__(
        self,
        density: SingleObjectDensity,
        measurements: FloatArray,
        sensor: SensorModel,
    ) -> None:
        self.density = density
        self._measurements = measurements
        self._sensor = sensor
        self._posteriors: dict[int, SingleObjectDensity] = {}
        self.log_likelihoods = self._log_likelihoods()

    def _log_likelihoods(self) -> FloatArray:
        if self._measurements.shape[0] == 0 or self._sensor.detection_prob == 0.0:
            return np.full(self._measurements.shape[0], -np.inf)
        z_pred, innovation_cov = self._sensor.predicted_measurement(self.density)
        try:
            factor = cho_factor(innovation_cov)
        except LinAlgError as e:
            msg = "innovation covariance is not invertible"
            raise SingularInnovationError(msg) from e
        nu = self._measurements - z_pred
        maha = np.einsum("ij,ji->i", nu, cho_solve(factor, nu.T))
        logdet = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
        dim = self._measurements.shape[1]
        return np.asarray(-0.5 * (maha + logdet + dim * math.log(2.0 * math.pi)))

    def posterior(self, j: int) -> SingleObjectDensity:
        """Density conditioned on the zero-based measurement j."""
        if j not in self._posteriors:
            _, updated = measurement_likelihood(
                self.density, self._measurements[j], self._sensor
            )
            self._posteriors[j] = updated
        return self._posteriors[j]


class _PredictionCache:
    """Predictions shared by every component that holds the same density object."""

    def __init__(
        self, measurements: FloatArray, motion: MotionModel, sensor: SensorModel
    ) -> None:
        self._measurements = measurements
        self._motion = motion
        self._sensor = sensor
        self._entries: dict[int, tuple[SingleObjectDensity, _Prediction]] = {}

    def get(self, density: SingleObjectDensity, *, survivor: bool) -> _Prediction:
        entry = self._entries.get(id(density))
        if entry is None:
            predicted = predict_density(density, self._motion) if survivor else density
            entry = (density, _Prediction(predicted, self._measurements, self._sensor))
            self._entries[id(density)] = entry
        return entry[1]


@dataclass(frozen=True)
class _Row:
    label: Label
    existence: float
    prediction: _Prediction


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def _build_rows(
    component: GlmbComponent,
    births: Sequence[BirthCandidate],
    cache: _PredictionCache,
    motion: MotionModel,
) -> list[_Row]:
    rows = [
        _Row(b.label, b.birth_prob, cache.get(b.density, survivor=False))
        for b in sorted(births, key=lambda b: b.label)
    ]
    rows.extend(
        _Row(label, motion.survival_prob, cache.get(density, survivor=True))
        for label, density in component.densities.items()
    )
    return rows


def _build_psi_table(
    rows: Sequence[_Row], measurements: FloatArray, sensor: SensorModel
) -> PsiTable:
    """Score table of the rows against the measurements.

    Column "died" holds 1 - r, "missed" holds r (1 - P_D) and measurement j
    holds r P_D g(z_j) / kappa(z_j), where r is the birth probability of a
    birth candidate or the survival probability of a surviving label. The sensor
    reports nothing outside its surveillance region, so measurements there get
    a zero detection score in every row.
    """
    n, m = len(rows), measurements.shape[0]
    log_scores = np.full((n, m + 2), -np.inf)
    p_d = sensor.detection_prob
    kappa = sensor.clutter(measurements) if m else np.zeros(0)
    inside = sensor.surveillance_region.contains(measurements) if m else kappa > 0
    log_kappa = np.where(inside, np.log(np.maximum(kappa, KAPPA_FLOOR)), np.inf)
    for r, row in enumerate(rows):
        log_r = _log(row.existence)
        log_scores[r, 0] = _log(1.0 - row.existence)
        log_scores[r, 1] = log_r + _log(1.0 - p_d)
        if m and p_d > 0.0:
            detection = log_r + math.log(p_d) - log_kappa
            log_scores[r, 2:] = detection + row.prediction.log_likelihoods
    return PsiTable.from_log_scores([row.label for row in rows], log_scores)


@dataclass(frozen=True)
class _Child:
    log_weight: float
    component: GlmbComponent
    association: AssociationMap


def _children(
    component: GlmbComponent,
    rows: Sequence[_Row],
    psi: PsiTable,
    target_sets: Iterable[tuple[int, ...]],
) -> list[_Child]:
    log_parent = _log(component.weight)
    children = []
    for targets in target_sets:
        log_w = log_parent + psi.log_weight(targets)
        if not math.isfinite(log_w):
            continue
        densities = {}
        for row, target in zip(rows, targets, strict=True):
            if target == 0:
                densities[row.label] = row.prediction.density
            elif target > 0:
                densities[row.label] = row.prediction.posterior(target - 1)
        pairs = zip((row.label for row in rows), targets, strict=True)
        history = extend_history(component.history_id, tuple(pairs))
        child = GlmbComponent(0.0, history, frozenset(densities), densities)
        children.append(_Child(log_w, child, psi.to_map(targets)))
    return children


Sampler = Callable[[GlmbComponent, PsiTable, int], list[tuple[int, ...]]]


def _component_budgets(prior: LabeledGlmb, requested: int) -> list[int]:
    """Split the component budget in proportion to sqrt of the prior weights."""
    roots = np.sqrt(np.maximum(prior.weights, 0.0))
    total = float(roots.sum())
    if total <= 0.0:
        return [1] * len(prior)
    return [max(1, math.ceil(requested * r / total)) for r in roots]


def _update(
    prior: LabeledGlmb,
    measurements: ArrayLike,
    births: Sequence[BirthCandidate],
    motion: MotionModel,
    sensor: SensorModel,
    sampler: Sampler,
    budgets: Sequence[int] | None,
) -> tuple[LabeledGlmb, dict[int, AssociationMap]]:
    z = np.asarray(measurements, dtype=np.float64).reshape(-1, sensor.measurement_dim)
    cache = _PredictionCache(z, motion, sensor)
    children: list[_Child] = []
    for index, component in enumerate(prior.components):
        rows = _build_rows(component, births, cache, motion)
        psi = _build_psi_table(rows, z, sensor)
        target_sets = sampler(component, psi, len(rows) + len(z))
        found = _children(component, rows, psi, target_sets)
        if budgets is not None and len(found) > budgets[index]:
            found = sorted(found, key=lambda c: -c.log_weight)[: budgets[index]]
        children.extend(found)

    if not children:
        msg = f"every association of {len(prior)} prior components has zero weight"
        raise AllZeroWeightsError(msg)
    log_weights = np.array([c.log_weight for c in children])
    weights = np.exp(log_weights - logsumexp(log_weights))
    components = [
        c.component.with_weight(float(w))
        for c, w in zip(children, weights, strict=True)
        if w > 0.0
    ]
    associations = {c.component.history_id: c.association for c in children}
    return LabeledGlmb.from_components(components), associations


def _used_by_best(
    posterior: LabeledGlmb, associations: dict[int, AssociationMap]
) -> frozenset[int]:
    best = min(posterior.components, key=GlmbComponent.rank_key)
    return associations[best.history_id].measurement_indices()


def joint_update_with_usage(
    prior: LabeledGlmb,
    measurements: ArrayLike,
    births: Sequence[BirthCandidate],
    motion: MotionModel,
    sensor: SensorModel,
    cfg: UpdateConfig,
) -> UpdateResult:
    """joint_update, also reporting the measurements of the best posterior component.

    Measurement indices are zero-based positions in `measurements`.
    """

    def sample(
        component: GlmbComponent, psi: PsiTable, size: int
    ) -> list[tuple[int, ...]]:
        if size < cfg.exact_threshold:
            return list(iter_valid_targets(psi))
        return [m.targets for m, _ in gibbs_sample(component, psi, cfg)]

    budgets = _component_budgets(prior, cfg.requested_components)
    posterior, associations = _update(
        prior, measurements, births, motion, sensor, sample, budgets
    )
    posterior = truncate(posterior, cfg.requested_components, 0.0)
    logger.debug(
        "Group update: %d prior -> %d posterior components", len(prior), len(posterior)
    )
    return UpdateResult(posterior, _used_by_best(posterior, associations))


def joint_update(
    prior: LabeledGlmb,
    measurements: ArrayLike,
    births: Sequence[BirthCandidate],
    motion: MotionModel,
    sensor: SensorModel,
    cfg: UpdateConfig,
) -> LabeledGlmb:
    """Posterior GLMB of one group after prediction and measurement update.

    Small instances (labels plus measurements below `cfg.exact_threshold`) are
    enumerated exactly; larger ones are explored with the Gibbs sampler, one
    chain per prior component. Each prior component keeps at most a share of
    `cfg.requested_components` proportional to the square root of its weight,
    and the normalized posterior is truncated to `cfg.requested_components`.

    Args:
        prior: Normalized prior density of the group
        measurements: (M, dim) measurements routed to the group
        births: Birth candidates joining the group this scan
        motion: Motion and survival model
        sensor: Detection, likelihood and clutter model
        cfg: Budget, sampler length and seed

    Returns:
        Normalized posterior density

    Raises:
        AllZeroWeightsError: If no association has positive weight
    """
    result = joint_update_with_usage(prior, measurements, births, motion, sensor, cfg)
    return result.posterior


def exhaustive_update(
    prior: LabeledGlmb,
    measurements: ArrayLike,
    births: Sequence[BirthCandidate],
    motion: MotionModel,
    sensor: SensorModel,
) -> LabeledGlmb:
    """Exact posterior over every valid association map, without truncation.

    Raises:
        ProblemTooLargeError: If more than 6 labels and births or more than 6
            measurements are involved
        AllZeroWeightsError: If no association has positive weight
    """
    z = np.asarray(measurements, dtype=np.float64).reshape(-1, sensor.measurement_dim)
    n_labels = len(prior.label_universe) + len(births)
    if n_labels > MAX_EXHAUSTIVE_LABELS or len(z) > MAX_EXHAUSTIVE_MEASUREMENTS:
        msg = (
            f"exhaustive update allows {MAX_EXHAUSTIVE_LABELS} labels and "
            f"{MAX_EXHAUSTIVE_MEASUREMENTS} measurements, got {n_labels} and {len(z)}"
        )
        raise ProblemTooLargeError(msg)

    def enumerate_all(
        _: GlmbComponent, psi: PsiTable, __: int
    ) -> list[tuple[int, ...]]:
        return list(iter_valid_targets(psi))

    posterior, _ = _update(prior, z, births, motion, sensor, enumerate_all, None)
    return posterior
