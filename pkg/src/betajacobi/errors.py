"""Exception hierarchy shared by every module of the package."""


class BetaJacobiError(Exception):
    """Base class for all package errors."""


class DomainError(BetaJacobiError, ValueError):
    """A parameter lies outside the validity region of a formula."""


class NonConvergence(BetaJacobiError, ArithmeticError):
    """A series or iteration did not reach the requested tolerance."""

    def __init__(self, message, *, value=None, tail_estimate=None, degree=None):
        super().__init__(message)
        self.value = value
        self.tail_estimate = tail_estimate
        self.degree = degree


class IllConditioned(BetaJacobiError, ArithmeticError):
    """A denominator vanishes, or cancellation destroys all significant digits."""


class LogarithmicCase(BetaJacobiError, ArithmeticError):
    """A connection formula hits an integer parameter difference (log terms)."""


class QuadratureFailure(BetaJacobiError, ArithmeticError):
    """Numerical integration did not meet its tolerance."""

    def __init__(self, message, *, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error
