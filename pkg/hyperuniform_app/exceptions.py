"""
Exception hierarchy for the hyperuniform app.

Management commands map ConfigurationError to exit code 2 and
NumericalError to exit code 3.
"""


class HyperuniformError(Exception):
    """Base class for all library errors."""


class ConfigurationError(HyperuniformError, ValueError):
    """Invalid parameters, unknown systems or malformed input."""


class NumericalError(HyperuniformError):
    """A computation could not deliver a trustworthy result."""


class ConvergenceError(NumericalError):
    """Iteration did not reach its tolerance."""


class UnderResolvedError(NumericalError):
    """A grid is too coarse for the requested accuracy."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class CoefficientOverflowError(NumericalError, OverflowError):
    """An exact integer left the 128-bit signed range."""


class MemoryBudgetError(NumericalError):
    """A word, sieve or table would exceed the configured budget."""


class ScanError(NumericalError):
    """One or more producer evaluations failed during a scan."""

    def __init__(self, message, failures=None, partial=None):
        super().__init__(message)
        self.failures = failures or []
        self.partial = partial


class SpectralConditioningWarning(UserWarning):
    """Eigen-data of a matrix is close to degenerate."""
