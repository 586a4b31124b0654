"""Exception types shared across the package."""


class CFDimError(Exception):
    """Base class for all errors raised by cfdim."""


class BudgetExceeded(CFDimError):
    """A word-count or bit budget would be exceeded."""

    def __init__(self, what: str, needed, budget):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class BracketFailure(CFDimError):
    """The covering sum does not cross 1 inside (0, 1]."""

    def __init__(self, message: str, log_sum_lo: float, log_sum_hi: float):
        super().__init__(message)
        self.log_sum_lo = log_sum_lo
        self.log_sum_hi = log_sum_hi


class PsiParseError(CFDimError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0, expected: str = ""):
        detail = message
        if text:
            detail += f" at position {position} in {text!r}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.text = text
        self.position = position
        self.expected = expected


class PsiDomainError(CFDimError, ArithmeticError):
    """Evaluating psi(n) left the real domain (log of 0, index past a table, ...)."""
