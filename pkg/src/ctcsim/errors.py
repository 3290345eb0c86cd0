"""Exception hierarchy for ctcsim."""


class CTCError(Exception):
    """Base class for all ctcsim errors."""


class WireError(CTCError, ValueError):
    """Unknown, duplicate or mismatched wires."""


class StateError(CTCError, ValueError):
    """Malformed state or operator data."""


class NullSubspaceError(CTCError):
    """Raised when a branch has (numerically) zero probability.

    The squared norm that triggered the error is kept on ``probability``.
    """

    def __init__(self, message: str, probability: float = 0.0):
        super().__init__(message)
        self.probability = probability


class ConvergenceError(CTCError):
    """Fixed-point iteration ran out of iterations.

    ``best`` holds the best iterate seen, as a DctcResult.
    """

    def __init__(self, message: str, residual: float, best=None):
        super().__init__(message)
        self.residual = residual
        self.best = best
