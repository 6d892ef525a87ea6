class LonelyRunnerError(Exception):
    """Base class for every error raised by this package."""


class SpeedVectorError(LonelyRunnerError, ValueError):
    """Raised when a speed vector is empty, unsorted, repeated or non-positive."""


class MalformedProgramError(LonelyRunnerError, ValueError):
    """Raised when a linear program has mismatched dimensions or non-finite data."""


class SolverError(LonelyRunnerError, RuntimeError):
    """Raised when the simplex iteration cap is hit or the final feasibility audit fails."""


class CoefficientRecoveryError(LonelyRunnerError, ArithmeticError):
    """Raised when sampled data is not an even trigonometric polynomial of the stated degree."""


class BoundSpecError(LonelyRunnerError, ValueError):
    """Raised when a bound specification violates its invariants."""


class ScanFileError(LonelyRunnerError, ValueError):
    """Raised when a scan file is missing columns or holds malformed values."""
