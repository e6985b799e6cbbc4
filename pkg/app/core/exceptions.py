"""
Error types raised by ForestWise services.

Every error derives from ForestWiseError, itself a ValueError, so callers
that only care about bad input can catch the standard exception.
"""


class ForestWiseError(ValueError):
    """Base class for all domain errors."""


class EmptySequence(ForestWiseError):
    """Degree sequence with no vertices."""


class NotAForest(ForestWiseError):
    """Degree sequence with c(s) <= 0, which no forest realizes."""


class CountOverflow(ForestWiseError):
    """A derived statistic does not fit in a signed 64-bit integer."""


class DegenerateSigma(ForestWiseError):
    """Scaling requested for a sequence whose second moment vanishes."""


class IndexOutOfRange(ForestWiseError):
    """Shift or mark index outside the valid range."""


class InvalidShiftIndex(ForestWiseError):
    """Rotation offset j outside [0, c(s) - 1]."""


class TooLarge(ForestWiseError):
    """Exhaustive enumeration or exact search above its cap."""


class NotFirstPassage(ForestWiseError):
    """Path that dips to its final level before the last step."""


class NotATree(ForestWiseError):
    """Tree requested from a degree sequence with c(s) != 1."""


class DomainError(ForestWiseError):
    """Argument outside the domain of a density or bound."""


class EmptySample(ForestWiseError):
    """Statistic requested on an empty sample."""


class ConfigurationError(ForestWiseError):
    """Experiment configuration that cannot be run."""


__all__ = [
    "ForestWiseError",
    "EmptySequence",
    "NotAForest",
    "CountOverflow",
    "DegenerateSigma",
    "IndexOutOfRange",
    "InvalidShiftIndex",
    "TooLarge",
    "NotFirstPassage",
    "NotATree",
    "DomainError",
    "EmptySample",
    "ConfigurationError",
]
