"""Budgeted restructuring of combinatorial solutions across changing instances."""

from .errors import (
    InfeasibleError,
    InfeasibleWithBudgetError,
    InputError,
    RestructError,
    TooLargeError,
)
from .money import Money

__version__ = "0.1.0"

__all__ = [
    "InfeasibleError",
    "InfeasibleWithBudgetError",
    "InputError",
    "Money",
    "RestructError",
    "TooLargeError",
    "__version__",
]
