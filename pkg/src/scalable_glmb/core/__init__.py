"""Labeled multi-object density types and bookkeeping."""

from .density import (
    TruncationConfig,
    best_component,
    cardinality,
    existence_probabilities,
    extract_estimates,
    normalize,
    truncate,
)
from .divergence import gaussian_kld, kld
from .errors import (
    AllZeroWeightsError,
    GlmbError,
    SupportMismatchError,
    UniverseTooLargeError,
)
from .types import (
    CardinalityDistribution,
    Factor,
    FactoredGlmb,
    GlmbComponent,
    Label,
    LabeledGlmb,
    SingleObjectDensity,
    merge_duplicates,
)

__all__ = [
    "AllZeroWeightsError",
    "CardinalityDistribution",
    "Factor",
    "FactoredGlmb",
    "GlmbComponent",
    "GlmbError",
    "Label",
    "LabeledGlmb",
    "SingleObjectDensity",
    "SupportMismatchError",
    "TruncationConfig",
    "UniverseTooLargeError",
    "best_component",
    "cardinality",
    "existence_probabilities",
    "extract_estimates",
    "gaussian_kld",
    "kld",
    "merge_duplicates",
    "normalize",
    "truncate",
]
