"""Exception types shared across the package."""


class FhnLabError(Exception):
    """Base class for all package errors."""


class ResolutionError(FhnLabError):
    """A grid is too coarse for the requested operation (mode order, phase speed)."""


class GuardError(FhnLabError):
    """A stability guard rejected the configuration before stepping."""


class BlowUpError(FhnLabError):
    """Non-finite values appeared during time integration."""

    def __init__(self, t: float, message: str | None = None):
        self.t = t
        super().__init__(message or f"non-finite state at t={t:.6g}")


class SolverError(FhnLabError):
    """An eigenvalue search failed (bracket expansion, bisection)."""


class DetectionError(FhnLabError):
    """A signal did not contain enough structure for the requested analysis."""


class ConfigError(FhnLabError):
    """An experiment configuration could not be parsed or validated."""
