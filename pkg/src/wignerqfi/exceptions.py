"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class DegenerateInputError(ValueError):
    """Input at which a closed form is singular (e.g. zero transverse momentum)."""


class UnsupportedError(ValueError):
    """Operation requested at the relativistic-limit marker, where it diverges."""


class ResolutionError(ValueError):
    """A grid is too coarse for the requested evaluation."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its tolerance.

    The best available estimate is kept on ``best_estimate`` (and the matching
    error estimate on ``error_estimate``) so callers can decide what to do.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
