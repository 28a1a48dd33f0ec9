"""Gibbs sampling of association maps."""

import numpy as np

from ..core.hashing import derive_seed
from ..core.types import GlmbComponent
from .association import DIED, MISSED, AssociationMap, PsiTable
from .config import UpdateConfig


def gibbs_sample(
    prior_component: GlmbComponent, psi_table: PsiTable, cfg: UpdateConfig
) -> list[tuple[AssociationMap, int]]:
    """Systematic-scan Gibbs sampler over valid association maps.

    The chain starts from the all-missed map. Each sweep resamples every label
    in row order from its conditional given the others: measurement columns
    held by another label are excluded, as are zero-score columns, and a label
    with no remaining support is set to died. The stationary distribution is
    proportional to the product of the selected row scores.

    The random stream is derived from `cfg.rng_seed` and the prior component's
    history, so two components of one group never share a stream.

    Args:
        prior_component: Component whose surviving labels (plus births) form the rows
        psi_table: Row scores for this component
        cfg: Sampler length and root seed

    Returns:
        Distinct maps in order of first visit, with visit counts over sweeps
    """
    seed = derive_seed(cfg.rng_seed, "gibbs", prior_component.history_id)
    rng = np.random.default_rng(seed)
    scores = psi_table.scores
    n, n_cols = scores.shape
    state = np.full(n, MISSED, dtype=np.int64)
    # owner[j] is the row holding measurement j (1-based), -1 when free
    owner = np.full(n_cols - 1, -1, dtype=np.int64)
    uniforms = rng.random((cfg.gibbs_iterations, n))
    counts: dict[tuple[int, ...], int] = {}

    for sweep in range(cfg.gibbs_iterations):
        for row in range(n):
            if state[row] > 0:
                owner[state[row]] = -1
            weights = scores[row].copy()
            weights[2:][owner[1:] >= 0] = 0.0
            cumulative = np.cumsum(weights)
            total = cumulative[-1]
            if total <= 0.0:
                choice = DIED
            else:
                target = uniforms[sweep, row] * total
                col = int(np.searchsorted(cumulative, target, side="right"))
                choice = col - 1
            state[row] = choice
            if choice > 0:
                owner[choice] = row
        key = tuple(int(t) for t in state)
        counts[key] = counts.get(key, 0) + 1

    return [(psi_table.to_map(targets), count) for targets, count in counts.items()]
