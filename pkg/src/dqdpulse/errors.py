"""Exception types raised at the package's contract boundaries."""


class DqdPulseError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(DqdPulseError, ValueError):
    """A parameter is non-finite or outside its documented range."""


class ContractViolationError(DqdPulseError, ValueError):
    """An input violates a documented precondition (non-Hermitian matrix,
    unnormalized state, non-unitary gate)."""


class DegeneracyError(DqdPulseError):
    """Eigenvalues too close to assign stable level labels."""


class DimensionMismatchError(DqdPulseError, ValueError):
    """Array shapes or grids of two arguments do not agree."""


class DivergenceError(DqdPulseError):
    """The field update produced non-finite values; the step gain is too
    large for this task."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


class ConfigError(DqdPulseError):
    """A run configuration file could not be parsed or validated."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PulseFormatError(DqdPulseError):
    """A pulse CSV file is malformed or has a non-uniform time grid."""
