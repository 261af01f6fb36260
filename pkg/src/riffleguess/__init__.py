"""Exact card-guessing computations for riffle-shuffled decks."""
from .errors import BudgetExceeded, InfeasibleInput, UnreachableDeck

__version__ = "0.1.0"

__all__ = ["BudgetExceeded", "InfeasibleInput", "UnreachableDeck", "__version__"]
