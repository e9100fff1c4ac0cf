"""Exception types shared across the package."""


class WdmemError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WdmemError):
    """Invalid construction parameters, config files, or run setup."""


class FormatError(ConfigurationError):
    """Malformed input data (bad CSV header, non-monotone time column, ...)."""


class DomainError(WdmemError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PassivityError(WdmemError):
    """A model produced a negative memductance / memristance."""


class NumericError(WdmemError):
    """Numerical failure (NaN, overflow, divergent fixed point)."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} (at t = {t} s)"
        super().__init__(message)
        self.t = t


class IdentificationError(WdmemError):
    """The identification pipeline cannot produce a characteristic."""


class AnalysisError(WdmemError):
    """Trace post-processing failed (e.g. not enough samples for one period)."""
