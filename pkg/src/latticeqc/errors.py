"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the physical or mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A numerical routine did not reach its tolerance within budget.

    ``estimates`` holds the last values produced before giving up, most recent
    last, so callers can judge how far off the result was.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)
