"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """A computed result contradicts a theorem the package relies on."""


class BudgetExceeded(RuntimeError):
    """A Groebner computation ran past its S-pair budget."""

    def __init__(self, message: str, spairs: int = 0):
        super().__init__(message)
        self.spairs = spairs
