"""Exception types shared across the package."""


class JunctionDoublyOccupied(ValueError):
    """A red and a blue car were both assigned to the junction cell."""


class DensityTooHigh(ValueError):
    """Requested car counts do not fit on the grid."""


class HypothesisNotMet(ValueError):
    """State does not show the arrival pattern the structure checks need."""


class EmptyInterval(ValueError):
    """No integer satisfies the requested pair of bounds."""


class ResourceLimit(RuntimeError):
    """Cycle search exceeded its step budget.

    Carries partial progress so callers can report how far the run got.
    """

    def __init__(self, message: str, steps_done: int, violations: int | None = None):
        super().__init__(message)
        self.steps_done = steps_done
        self.violations = violations
