"""Exception types shared across the sensor model."""

from __future__ import annotations


class SensorModelError(Exception):
    """Base class for all model-specific failures."""


class SymmetryError(SensorModelError):
    """A matrix that must be symmetric is not, beyond tolerance."""


class UnphysicalCovarianceError(SensorModelError):
    """A covariance matrix violates the uncertainty principle."""


class StabilityError(SensorModelError):
    """The drift matrix has an eigenvalue at or beyond the stability margin."""


class FixedPointError(SensorModelError):
    """The steady-state solver failed to converge.

    Carries the final residual norm and iteration count for diagnostics.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class LyapunovResidualError(SensorModelError):
    """The steady covariance does not satisfy its defining equation."""


class ResonanceError(SensorModelError):
    """The RF drive sits on the varactor self-resonance pole."""


class ArrayInconsistencyError(SensorModelError):
    """The set of triggered compass pairs is not a contiguous arc."""


class ConfigError(SensorModelError):
    """A run configuration document failed validation.

    ``location`` is a dotted path into the document (for example
    ``sweep.points``) naming the offending entry.
    """

    def __init__(self, message: str, location: str = ""):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
