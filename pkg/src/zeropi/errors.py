"""Exception types shared across the package."""


class ZeroPiError(Exception):
    """Base class for package errors."""


class ConfigError(ZeroPiError):
    """Invalid configuration value or unparseable config file.

    ``line`` carries the 1-based line number when the error originates from a
    config file.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(ZeroPiError):
    """Numerical failure (NaN, divergence, non-convergent quadrature)."""


class GridResolutionError(NumericalError):
    """Grid too coarse for the requested integration."""


class ModeOverlapError(ZeroPiError):
    """Temporal modes overlap too strongly to be meaningful."""
