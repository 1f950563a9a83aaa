"""Exception types shared across the package."""


class FastRankError(Exception):
    """Base class for all package errors."""


class NotInvertibleError(FastRankError, ZeroDivisionError):
    """Raised when inverting zero in the field."""


class SingularMatrixError(FastRankError, ArithmeticError):
    """Raised when a matrix (or a Woodbury capacitance matrix) is singular."""


class DimensionError(FastRankError, ValueError):
    """Raised on shape mismatches and out-of-range indices."""


class VerificationError(FastRankError, RuntimeError):
    """A Monte Carlo result failed certification after the retry budget."""


class ParseError(FastRankError, ValueError):
    """Malformed input file or script line."""
