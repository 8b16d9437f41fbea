"""Exception hierarchy.

The CLI maps these onto exit codes: ValidationError -> 1, NumericalError
(and subclasses) -> 2, OSError -> 3.
"""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (eigensolver, degenerate normalization)."""


class DegenerateChannelError(NumericalError):
    """The Kraus accumulation matrix G lost rank; the set cannot be renormalized."""


class OptimizationError(NumericalError):
    """An optimization run aborted. Carries the partial trace recorded so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
