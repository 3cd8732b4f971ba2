"""Exception types shared across the package."""


class QarbError(Exception):
    """Base class for all package-specific errors."""


class ParseError(QarbError):
    """Input data could not be parsed."""


class NonSquareError(QarbError):
    """A rate or weight matrix is not square (or row/column counts disagree)."""


class NonPositiveRateError(QarbError):
    """An exchange rate is zero, negative, or non-finite."""


class DimensionMismatchError(QarbError):
    """Two objects that must share a dimension do not."""


class LengthMismatchError(QarbError):
    """A bit vector has the wrong number of entries."""


class TooLargeError(QarbError):
    """Problem size exceeds what exhaustive enumeration allows."""


class UnboundedSlackError(QarbError):
    """An inequality constraint admits no finite nonnegative slack range."""


class UnknownPatternError(QarbError):
    """Entanglement pattern name is not recognized."""


class ParamCountMismatchError(QarbError):
    """Parameter vector length does not match the circuit specification."""


class ConfigMismatchError(QarbError):
    """Run configuration is inconsistent with the problem instance."""


class InvalidBoundsError(QarbError):
    """Optimizer bounds are malformed or non-finite."""


class ObjectiveShapeMismatchError(QarbError):
    """A batched objective returned the wrong number of values."""
