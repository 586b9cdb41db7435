"""Exception types shared across the package.

The CLI maps these onto its exit codes (see ``sigma_lab.cli``).
"""


class SigmaLabError(Exception):
    """Base class for all package errors."""


class DomainError(SigmaLabError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NumericalFailure(SigmaLabError, ArithmeticError):
    """A computation produced NaN/Inf or a validity monitor was breached."""


class ConfigError(SigmaLabError):
    """Invalid experiment configuration.

    ``path`` names the offending field, e.g. ``"grid.N"``.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)
