"""Exception types shared across the package."""


class ChoqError(Exception):
    """Base class for all package errors."""


class ParameterError(ChoqError, ValueError):
    """An argument violates a documented precondition."""


class InputError(ChoqError, ValueError):
    """Input data (masks, sampled values) is malformed for the operation."""


class SingularityError(InputError):
    """A sampled function was evaluated at its singular point."""


class ResolutionError(ChoqError):
    """The grid is too coarse to represent the requested geometry."""


class ViolationError(ChoqError):
    """A mathematically guaranteed inequality failed at runtime."""


class ConsistencyError(ChoqError):
    """Two evaluation routes that must agree disagreed."""


class IncompleteCoverError(ChoqError):
    """The greedy cover ran out of budget before covering every cell.

    Carries the value accumulated so far so callers can still report a
    (non-certified) partial upper bound.
    """

    def __init__(self, message: str, partial_value: float, uncovered: int):
        super().__init__(message)
        self.partial_value = partial_value
        self.uncovered = uncovered
