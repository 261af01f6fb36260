"""Exception types shared across the package."""
from __future__ import annotations


class RiffleGuessError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(RiffleGuessError):
    """An exhaustive enumeration would exceed the configured size limit."""


class InfeasibleInput(RiffleGuessError):
    """The requested state cannot occur (zero total weight)."""


class UnreachableDeck(InfeasibleInput):
    """A deck that one riffle shuffle cannot produce."""


class SeriesError(RiffleGuessError):
    """Invalid operation in the asymptotic series ring."""


class DegenerateDistribution(RiffleGuessError):
    """A statistic is undefined because the variance is zero."""
