"""Exception hierarchy.

Two families matter to callers (and to the command line exit codes):
:class:`ValidationError` for malformed input and :class:`HypothesisError`
for well-formed input on which a numerical hypothesis fails.
"""


class SylvliftError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SylvliftError, ValueError):
    """Input is malformed: wrong shapes, out-of-domain parameters."""


class DimensionError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class SeparationError(ValidationError):
    """Two spectral sets that must be disjoint overlap."""


class NotPSDError(ValidationError):
    pass


class HypothesisError(SylvliftError, ArithmeticError):
    """A numerical hypothesis (invertibility, contraction, convergence) fails."""


class SingularMatrixError(HypothesisError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ShiftCollisionError(SingularMatrixError):
    """An ADI shift coincides (to working precision) with a spectrum point."""

    def __init__(self, message, iteration, pivot=None):
        super().__init__(message, pivot=pivot)
        self.iteration = iteration


class SpectraIntersectError(SingularMatrixError):
    pass


class ContractionError(HypothesisError):
    pass


class DivergenceError(HypothesisError):
    pass


class CapacityError(SylvliftError, MemoryError):
    """Dense fallback refused because the problem is too large."""


class InconsistentInputError(HypothesisError):
    pass


class SearchError(HypothesisError):
    pass
