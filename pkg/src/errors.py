"""Named error types shared by every module.

Input problems derive from ``ValueError`` so callers that already guard
with ``except ValueError`` keep working; numerical failures derive from
``RuntimeError``.  The CLI maps the two families onto distinct exit codes.
"""


class MSEError(Exception):
    """Common base for all toolkit errors."""


class DimensionMismatch(MSEError, ValueError):
    pass


class NotHermitian(MSEError, ValueError):
    pass


class PartitionMismatch(MSEError, ValueError):
    pass


class IndexOutOfRange(MSEError, ValueError):
    pass


class InvalidPartition(MSEError, ValueError):
    pass


class InvalidArgument(MSEError, ValueError):
    pass


class DimensionGuard(MSEError, ValueError):
    """Problem too large for a dense brute-force routine."""


class UnsupportedSpace(MSEError, ValueError):
    pass


class EigenDecompositionFailure(MSEError, RuntimeError):
    pass


class NoConvergedSolution(MSEError, RuntimeError):
    """Raised when no multistart run certified its residual."""
