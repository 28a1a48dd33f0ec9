"""Per-scan orchestration: partition, refactor, route, update, report."""

import logging
import time
from collections.abc import Iterator, Sequence
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np
from numpy.typing import NDArray

from ..core.density import existence_probabilities, extract_estimates
from ..core.errors import GlmbError, GroupUpdateError
from ..core.hashing import derive_seed
from ..core.types import (
    Factor,
    FactoredGlmb,
    FloatArray,
    GlmbComponent,
    Label,
    LabeledGlmb,
    SingleObjectDensity,
)
from ..factors.refactor import refactor
from ..metrics.tracks import Track
from ..models.birth import BirthCandidate, births_for_scan
from ..models.config import ModelSet
from ..models.motion import predict_density
from ..partition.boxes import BoundingBox, project_box, rescale_box
from ..partition.grouping import LabelPartition, build_partition
from ..partition.routing import route_measurements
from ..simulation.measurements import ScanData
from ..update.joint import UpdateResult, joint_update_with_usage
from .config import EngineConfig
from .state import ScanDiagnostics, TrackerState

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class _GroupTask:
    index: int
    labels: frozenset[Label]
    prior: LabeledGlmb
    births: tuple[BirthCandidate, ...]
    measurement_indices: NDArray[np.intp]

    @property
    def size(self) -> int:
        return len(self.labels) + len(self.births)

    def all_labels(self) -> list[Label]:
        return sorted(self.labels | {b.label for b in self.births})


def label_densities(factored: FactoredGlmb) -> dict[Label, SingleObjectDensity]:
    """Density of every label, taken from the best component that contains it."""
    densities: dict[Label, SingleObjectDensity] = {}
    for factor in factored.factors:
        ranked = sorted(factor.density.components, key=GlmbComponent.rank_key)
        for component in ranked:
            for label, density in component.densities.items():
                densities.setdefault(label, density)
    return densities


def label_boxes(
    factored: FactoredGlmb, models: ModelSet, gate_prob: float
) -> list[BoundingBox]:
    """Box around the predicted measurement of every label, ordered by label."""
    densities = label_densities(factored)
    return [
        project_box(
            label,
            predict_density(densities[label], models.motion),
            models.sensor,
            gate_prob,
        )
        for label in sorted(densities)
    ]


def _place_births(
    births: Sequence[BirthCandidate],
    partition: LabelPartition,
    group_boxes: Sequence[Sequence[BoundingBox]],
    models: ModelSet,
    cap: int,
) -> tuple[list[list[BirthCandidate]], list[BirthCandidate]]:
    """Births joining each group, and those left to form singleton groups.

    A birth joins the first group whose region contains its predicted
    measurement, provided the group stays within the size cap.
    """
    joined: list[list[BirthCandidate]] = [[] for _ in partition.groups]
    if not births:
        return joined, []
    seeds = np.array(
        [models.sensor.predicted_measurement(b.density)[0] for b in births]
    )
    routing = route_measurements(partition, group_boxes, seeds)
    containing: list[list[int]] = [[] for _ in births]
    for group, indices in enumerate(routing.group_indices):
        for i in indices:
            containing[int(i)].append(group)

    sizes = partition.sizes
    singles = []
    for birth, groups in zip(births, containing, strict=True):
        for group in groups:
            if sizes[group] + len(joined[group]) < cap:
                joined[group].append(birth)
                break
        else:
            singles.append(birth)
    return joined, singles


def _plan_groups(
    factored: FactoredGlmb,
    partition: LabelPartition,
    boxes: Sequence[BoundingBox],
    births: Sequence[BirthCandidate],
    measurements: FloatArray,
    models: ModelSet,
    cap: int,
) -> list[_GroupTask]:
    group_of = partition.group_of()
    group_boxes: list[list[BoundingBox]] = [[] for _ in partition.groups]
    for box in boxes:
        group_boxes[group_of[box.label]].append(box)

    joined, singles = _place_births(births, partition, group_boxes, models, cap)
    gate_prob = partition.gate_prob_used
    for group, members in enumerate(joined):
        group_boxes[group].extend(
            project_box(b.label, b.density, models.sensor, gate_prob) for b in members
        )
    for birth in singles:
        group_boxes.append(
            [project_box(birth.label, birth.density, models.sensor, gate_prob)]
        )

    routing_partition = LabelPartition(
        partition.groups + tuple(frozenset({b.label}) for b in singles), gate_prob
    )
    routing = route_measurements(routing_partition, group_boxes, measurements)

    tasks = [
        _GroupTask(
            index,
            factor.label_group,
            factor.density,
            tuple(joined[index]),
            routing.group_indices[index],
        )
        for index, factor in enumerate(factored.factors)
    ]
    offset = len(tasks)
    tasks.extend(
        _GroupTask(
            offset + n,
            frozenset(),
            LabeledGlmb.unit(),
            (birth,),
            routing.group_indices[offset + n],
        )
        for n, birth in enumerate(singles)
    )
    return tasks


def _update_group(
    task: _GroupTask,
    measurements: FloatArray,
    models: ModelSet,
    cfg: EngineConfig,
    scan: int,
) -> UpdateResult:
    seed = derive_seed(cfg.seed, "group-update", scan, task.index)
    update_cfg = cfg.update.model_copy(update={"rng_seed": seed})
    try:
        return joint_update_with_usage(
            task.prior,
            measurements[task.measurement_indices],
            task.births,
            models.motion,
            models.sensor,
            update_cfg,
        )
    except (GlmbError, ValueError, np.linalg.LinAlgError) as e:
        raise GroupUpdateError(task.index, task.all_labels(), str(e)) from e


def step(
    state: TrackerState,
    scan: ScanData,
    models: ModelSet,
    cfg: EngineConfig,
    executor: Executor | None = None,
) -> TrackerState:
    """Advance the tracker by one scan.

    The labels of the current factors are boxed around their predicted
    measurements and grouped, the factors are refactored onto the new groups,
    births seeded by the previous scan's unused measurements join a group
    containing their seed or form their own, measurements are routed and every
    group is updated independently. Estimates of each group are appended to
    the track log.

    Args:
        state: State after the previous scan
        scan: Measurements of scan state.scan + 1
        models: Motion, sensor and birth models
        cfg: Update, partition and truncation parameters
        executor: Optional executor the group updates are mapped over

    Returns:
        The state after this scan; the input state is left untouched

    Raises:
        ValueError: If the scan does not follow the state's scan
        GroupUpdateError: If the update of a group fails
    """
    k = scan.scan
    if k != state.scan + 1:
        raise ValueError(f"expected scan {state.scan + 1}, got {k}")
    started = time.perf_counter()

    partition_cfg = cfg.partition
    boxes = label_boxes(state.factored, models, partition_cfg.initial_gate_prob)
    partition = build_partition(boxes, partition_cfg)
    if partition.gate_prob_used != partition_cfg.initial_gate_prob:
        boxes = [
            rescale_box(b, partition_cfg.initial_gate_prob, partition.gate_prob_used)
            for b in boxes
        ]
    prior = refactor(state.factored, partition, cfg.truncation, executor)

    births = births_for_scan(
        state.unused_measurements, k, models.birth, models.sensor, models.motion
    )
    z = scan.measurements.reshape(-1, models.sensor.measurement_dim)
    tasks = _plan_groups(
        prior, partition, boxes, births, z, models, partition_cfg.max_group_size
    )

    def update(task: _GroupTask) -> UpdateResult:
        return _update_group(task, z, models, cfg, k)

    if executor is None:
        results = [update(task) for task in tasks]
    else:
        results = list(executor.map(update, tasks))

    factors = []
    used: set[int] = set()
    for task, result in zip(tasks, results, strict=True):
        posterior = result.posterior
        if posterior.label_universe:
            factors.append(Factor(posterior.label_universe, posterior))
        local = np.array(sorted(result.used_measurements), dtype=np.intp)
        used.update(int(j) for j in task.measurement_indices[local])
    factored = FactoredGlmb(tuple(factors))

    existence: dict[Label, float] = {}
    estimates: dict[Label, FloatArray] = {}
    for factor in factored.factors:
        existence.update(existence_probabilities(factor.density))
        estimates.update(extract_estimates(factor.density))

    counts = {
        label: (state.low_existence_counts.get(label, 0) + 1)
        if r < cfg.existence_threshold
        else 0
        for label, r in existence.items()
    }
    terminated = frozenset(
        label
        for label in existence
        if label in state.terminated or counts[label] >= cfg.termination_scans
    )

    track_log = dict(state.track_log)
    reported = 0
    for label in sorted(estimates):
        if label in terminated:
            continue
        track_log[label] = (*track_log.get(label, ()), (k, estimates[label]))
        reported += 1

    unused = np.setdiff1d(np.arange(z.shape[0]), np.fromiter(used, dtype=np.intp))
    diagnostics = ScanDiagnostics(
        scan=k,
        group_count=len(tasks),
        max_group_size=max((task.size for task in tasks), default=0),
        gate_prob_used=partition.gate_prob_used,
        label_count=len(factored.label_universe),
        component_count=sum(len(f.density) for f in factored.factors),
        estimated_cardinality=reported,
        wall_time=time.perf_counter() - started,
    )
    logger.debug(
        "Scan %d: %d groups (largest %d), %d labels, %d components, %d tracks, "
        "%.3fs",
        k,
        diagnostics.group_count,
        diagnostics.max_group_size,
        diagnostics.label_count,
        diagnostics.component_count,
        reported,
        diagnostics.wall_time,
    )
    return TrackerState(
        factored=factored,
        scan=k,
        track_log=MappingProxyType(track_log),
        diagnostics=(*state.diagnostics, diagnostics),
        unused_measurements=z[unused],
        low_existence_counts=MappingProxyType(counts),
        terminated=terminated,
    )


@contextmanager
def thread_pool(threads: int) -> Iterator[Executor | None]:
    """A thread pool for `threads` > 1, otherwise None (run inline)."""
    if threads <= 1:
        yield None
        return
    with ThreadPoolExecutor(max_workers=threads) as executor:
        yield executor


def run(
    scans: Sequence[ScanData], models: ModelSet, cfg: EngineConfig
) -> tuple[list[Track], list[ScanDiagnostics]]:
    """Fold `step` over consecutive scans.

    Returns:
        Estimated tracks (ids are labels, states [x, y, vx, vy]) and one
        diagnostics record per scan
    """
    if not scans:
        return [], []
    state = TrackerState.initial(scans[0].scan)
    with thread_pool(cfg.threads) as executor:
        for scan in scans:
            state = step(state, scan, models, cfg, executor)
    logger.info(
        "Tracked %d scans, %d tracks reported", len(scans), len(state.track_log)
    )
    return state.tracks(), list(state.diagnostics)
