"""Exception hierarchy shared by every module."""


class CalbchError(Exception):
    """Base class for library errors."""


class DegreeMismatchError(CalbchError, ValueError):
    pass


class ValuationError(CalbchError, ValueError):
    pass


class NotDivisibleError(CalbchError, ArithmeticError):
    pass


class TruncationError(CalbchError, ValueError):
    """A quantity above the truncation degree was requested."""


class StructureError(CalbchError, ValueError):
    """Structure constants violate an axiom (antisymmetry, Jacobi, grading)."""


class InvariantViolation(CalbchError, AssertionError):
    """An internal consistency check failed; indicates a bug or bad input."""


class GroupLikeError(InvariantViolation):
    pass


class ResidualError(InvariantViolation):
    """Reduction to U(T) coordinates left a nonzero residual."""
