"""
Exceptions raised by volclust.

Every error derives from ValueError so callers that only guard against bad
input keep working.
"""

from typing import Optional


class VolClustError(ValueError):
    """Root of all volclust errors."""


class IngestError(VolClustError):
    """Malformed or invalid price input."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)


class InvalidParameterError(VolClustError):
    """A parameter is outside its admissible range (tau, p, n, bins...)."""


class DegenerateInputError(VolClustError):
    """The data cannot support the requested statistic (zero variance, P in {0, 1}, ...)."""


class EmptyCategoryError(DegenerateInputError):
    """A conditioning category of a transition table has no observations."""


class ConfigError(VolClustError):
    """Invalid run configuration."""


class OutputError(VolClustError):
    """Artifacts cannot be written (unwritable path, run_id collision)."""
