"""Ground-truth trajectories drawn from the scenario's birth process."""

import logging

import numpy as np
from scipy.stats import invwishart

from ..core.hashing import derive_seed
from ..core.types import FloatArray
from ..metrics.tracks import Track
from ..models.sensor import Region
from .config import ScenarioConfig

logger = logging.getLogger(__name__)

MAX_POSITION_DRAWS = 100


def birth_mixture(
    cfg: ScenarioConfig, rng: np.random.Generator
) -> tuple[FloatArray, FloatArray]:
    """Means and covariances of the Gaussian mixture births are drawn from.

    Means are uniform over the region shrunk by the mixture margin; covariances
    are inverse-Wishart draws with the configured scale and degrees of freedom.

    Returns:
        (n, 2) means and (n, 2, 2) covariances
    """
    region = cfg.region
    n = cfg.birth_mixture_components
    margin_x = min(cfg.mixture_margin, (region.x_max - region.x_min) / 2)
    margin_y = min(cfg.mixture_margin, (region.y_max - region.y_min) / 2)
    means = np.column_stack(
        [
            rng.uniform(region.x_min + margin_x, region.x_max - margin_x, size=n),
            rng.uniform(region.y_min + margin_y, region.y_max - margin_y, size=n),
        ]
    )
    scale = np.asarray(cfg.mixture_scale_matrix, dtype=np.float64)
    draws = invwishart(df=cfg.wishart_dof, scale=scale).rvs(size=n, random_state=rng)
    covariances = np.reshape(draws, (n, 2, 2))
    return means, covariances


def _draw_position(
    rng: np.random.Generator, mean: FloatArray, cov: FloatArray, region: Region
) -> FloatArray:
    for _ in range(MAX_POSITION_DRAWS):
        position = rng.multivariate_normal(mean, cov)
        if region.contains(position)[0]:
            return np.asarray(position)
    return np.clip(mean, [region.x_min, region.y_min], [region.x_max, region.y_max])


def _trajectory(
    start: int,
    position: FloatArray,
    velocity: FloatArray,
    steps: int,
    dt: float,
    region: Region,
) -> tuple[np.ndarray, FloatArray]:
    offsets = np.arange(steps, dtype=np.float64)[:, None] * dt
    positions = position[None, :] + offsets * velocity[None, :]
    inside = region.contains(positions)
    # an object that leaves the region dies there
    alive = steps if inside.all() else int(np.argmin(inside))
    times = start + np.arange(alive, dtype=np.int64)
    states = np.hstack([positions[:alive], np.tile(velocity, (alive, 1))])
    return times, states


def generate_truth(cfg: ScenarioConfig) -> list[Track]:
    """Draw the true trajectories of a scenario.

    At every scan k in 1..duration a Poisson number of objects is born with
    the rate of the birth windows covering k. Each starts at a mixture draw
    inside the region with a uniform course, a speed uniform over the speed
    range and an integer lifetime uniform over the lifetime range, then moves
    with constant velocity until its lifetime ends, it leaves the region or
    the scenario ends.

    Args:
        cfg: Scenario parameters; the same configuration gives the same truth

    Returns:
        Tracks with states [x, y, vx, vy], ids "truth-<n>" in birth order
    """
    rng = np.random.default_rng(derive_seed(cfg.rng_seed, "truth"))
    region = cfg.region.to_region()
    means, covariances = birth_mixture(cfg, rng)
    low_speed, high_speed = cfg.speed_range
    low_life, high_life = cfg.lifetime_range

    tracks: list[Track] = []
    for k in range(1, cfg.duration + 1):
        for _ in range(int(rng.poisson(cfg.birth_rate(k)))):
            component = int(rng.integers(means.shape[0]))
            position = _draw_position(
                rng, means[component], covariances[component], region
            )
            course = rng.uniform(0.0, 2.0 * np.pi)
            speed = rng.uniform(low_speed, high_speed)
            lifetime = int(rng.integers(low_life, high_life + 1))
            velocity = speed * np.array([np.cos(course), np.sin(course)])
            steps = min(lifetime, cfg.duration - k + 1)
            times, states = _trajectory(
                k, position, velocity, steps, cfg.scan_interval, region
            )
            tracks.append(Track(f"truth-{len(tracks)}", times, states))

    logger.info("Generated %d true objects over %d scans", len(tracks), cfg.duration)
    return tracks


def expected_cardinality(cfg: ScenarioConfig, k: int) -> float:
    """Mean number of objects alive at scan k, ignoring exits from the region."""
    low, high = cfg.lifetime_range
    span = high - low + 1
    total = 0.0
    for birth in range(1, k + 1):
        age = k - birth
        surviving = max(0, high - max(age, low - 1))
        total += cfg.birth_rate(birth) * min(surviving, span) / span
    return total
