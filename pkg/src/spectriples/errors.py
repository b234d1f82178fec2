"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operands have incompatible shapes."""


class ValidationError(Exception):
    """A structural invariant failed; carries the itemized report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class HomomorphismError(ValueError):
    """A map claimed to be a unital *-homomorphism is not, or is not
    surjective where surjectivity is required.  ``kind`` classifies the
    failure ("not_multiplicative", "not_unital", "not_star",
    "not_surjective", "bad_routing")."""

    def __init__(self, message, kind):
        super().__init__(message)
        self.kind = kind


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold; carries the
    measured residual when available."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IterationLimitError(RuntimeError):
    """Iterative solver hit its iteration budget.  Best lower/upper bounds
    found so far are attached."""

    def __init__(self, message, lower=None, upper=None, iterations=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.iterations = iterations


class GridResolutionError(ValueError):
    """The requested computation needs a finer grid than was supplied."""
