"""Per-group joint prediction and update."""

from .association import (
    DIED,
    MISSED,
    AssociationMap,
    PsiTable,
    enumerate_associations,
    iter_valid_targets,
)
from .config import UpdateConfig
from .joint import (
    UpdateResult,
    exhaustive_update,
    joint_update,
    joint_update_with_usage,
)
from .sampler import gibbs_sample

__all__ = [
    "DIED",
    "MISSED",
    "AssociationMap",
    "PsiTable",
    "UpdateConfig",
    "UpdateResult",
    "enumerate_associations",
    "exhaustive_update",
    "gibbs_sample",
    "iter_valid_targets",
    "joint_update",
    "joint_update_with_usage",
]
