"""Error taxonomy and global defaults shared across the library."""

DEFAULT_ENUMERATION_BUDGET = 10**8
DEFAULT_RENORM_CAP = 32


class SpectraLabError(Exception):
    """Base class for library errors."""


class InputError(SpectraLabError):
    """Malformed spec, word, or parameter (CLI exit code 1)."""


class CapacityError(SpectraLabError):
    """An enumeration would exceed the configured budget (CLI exit code 3)."""

    def __init__(self, count, budget, what="enumeration"):
        self.count = count
        self.budget = budget
        super().__init__(f"{what} would produce {count} items, budget is {budget}")


class JunctionForbiddenError(SpectraLabError):
    """Concatenation at a forbidden transition pair."""

    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"junction pair ({a}, {b}) is forbidden by the transition matrix")


class NotMarkovError(SpectraLabError):
    """An operation would leave data that is not a Markov partition."""


class PreconditionError(SpectraLabError):
    """A documented operation precondition is violated; reported, never guessed around."""


class RenormCapError(SpectraLabError):
    """A branch needs more composition steps than the configured cap."""

    def __init__(self, symbol, cap):
        self.symbol = symbol
        self.cap = cap
        super().__init__(f"symbol {symbol} needs more than {cap} steps to cover two intervals")


class IndeterminateError(SpectraLabError):
    """Certified bounds straddle a decision threshold (CLI exit code 2).

    Carries the straddle details so callers can report rather than guess.
    """

    def __init__(self, message, details=None):
        self.details = details or {}
        super().__init__(message)


class BudgetExhaustedError(SpectraLabError):
    """An iterative computation hit its budget before reaching the tolerance."""
