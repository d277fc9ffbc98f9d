"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(OverflowError):
    """Exact-arithmetic request beyond the supported size limits."""


class SeriesTruncationError(ArithmeticError):
    """An infinite series failed to reach the requested tail bound.

    Raised instead of returning a silent partial sum; carries the partial
    sum and the best tail bound achieved so far.
    """

    def __init__(self, message, partial=None, bound=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound


class QuadratureError(ArithmeticError):
    """Numerical integration failed to reach the requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
