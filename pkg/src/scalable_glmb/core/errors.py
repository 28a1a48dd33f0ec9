"""Exception hierarchy for the tracker."""

from collections.abc import Iterable


class GlmbError(Exception):
    """Base class for all tracker errors."""

    pass


class AllZeroWeightsError(GlmbError):
    """Raised when every component of a density has zero weight."""

    pass


class UniverseTooLargeError(GlmbError):
    """Raised when an enumeration over label subsets would be too large."""

    pass


class SupportMismatchError(GlmbError):
    """Raised when q assigns zero mass to a label set that p supports."""

    pass


class SingularInnovationError(GlmbError):
    """Raised when an innovation covariance cannot be inverted."""

    pass


class ProblemTooLargeError(GlmbError):
    """Raised when an exhaustive update exceeds its enumeration guard."""

    pass


class LabelCollisionError(GlmbError):
    """Raised when multiplying densities whose label universes intersect."""

    pass


class PartitionMismatchError(GlmbError):
    """Raised when a partition does not cover the labels of a factored density."""

    pass


class ConfigError(GlmbError):
    """Raised when a run configuration cannot be parsed or validated."""

    pass


class SchemaError(GlmbError):
    """Raised when an input file does not carry the expected schema header."""

    pass


class GroupUpdateError(GlmbError):
    """Raised when the update of one partition group fails.

    The failing group is identified by its index in the partition and its labels.
    """

    def __init__(self, group_index: int, labels: Iterable[object], cause: str) -> None:
        self.group_index = group_index
        self.labels = tuple(labels)
        shown = ", ".join(str(label) for label in self.labels) or "<births only>"
        super().__init__(f"Update of group {group_index} [{shown}] failed: {cause}")
