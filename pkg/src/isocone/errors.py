"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(ValueError):
    """A data container violates one of its invariants."""


class ResolutionError(ValueError):
    """A grid is too coarse for the requested computation."""


class SpecParseError(ValueError):
    """A manifold spec string could not be resolved to a catalog entry."""


class FormulaInapplicableError(ValueError):
    """No bound formula applies to the given input (e.g. no positive Ricci bound)."""


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted before the convergence criterion was met.

    Carries the best result found so far in ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
