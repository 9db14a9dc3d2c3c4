"""Exception types raised by the library."""


class ContractError(ValueError):
    """An input violates a documented precondition (shape, hermiticity, ...)."""


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class ModelViolationError(NotPSDError):
    """The CKN Kraus operators themselves violate a model identity."""


class DegeneratePostselectionError(ValueError):
    """The accessible (post-selected) branch has vanishing probability."""


class ConvergenceError(RuntimeError):
    """An iterative optimizer did not converge.

    The best value found is kept on ``best`` so callers can still use it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
