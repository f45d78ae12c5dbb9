"""Exception hierarchy used throughout :mod:`shiftspline`."""


class ShiftSplineError(Exception):
    pass


class InvalidArgumentError(ShiftSplineError, ValueError):
    """Malformed input: wrong shape, non-finite values, dimension mismatch."""


class DomainError(ShiftSplineError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(ShiftSplineError, ValueError):
    """A documented precondition does not hold."""


class HypothesisViolatedError(PreconditionError):
    """Spacing exceeds the admissible threshold of the error bound."""

    def __init__(self, message, threshold_name=None, ln_threshold=None):
        super().__init__(message)
        self.threshold_name = threshold_name
        self.ln_threshold = ln_threshold


class DivergentMomentError(DomainError):
    pass


class UnisolvencyError(ShiftSplineError):
    """The point set is not a determining set for the polynomial space."""

    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree


class IllConditioningError(ShiftSplineError):
    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class CPDViolationError(ShiftSplineError):
    """The kernel quadratic form is significantly negative on a constrained vector."""


class FitUnavailableError(ShiftSplineError):
    pass


class SetupError(ShiftSplineError):
    """An experiment configuration cannot be run as specified."""
