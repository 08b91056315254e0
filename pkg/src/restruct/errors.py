"""Exception hierarchy shared by every module.

The CLI maps these onto its exit-code contract, so each class carries the
code it should produce.
"""

from __future__ import annotations


class RestructError(Exception):
    exit_code = 1


class InputError(RestructError, ValueError):
    """Malformed document, bad field, or a value outside its declared scale."""

    exit_code = 2


class ScaleMismatchError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class InvalidInstanceError(InputError):
    pass


class InvalidChoiceError(InputError):
    pass


class InvalidOpsError(InputError):
    pass


class InfeasibleError(RestructError):
    exit_code = 3


class NoSpanningTreeError(InfeasibleError):
    pass


class InfeasibleWithBudgetError(InfeasibleError):
    """No solution reachable within the change budget.

    ``min_budget`` is filled in when the caller could afford to compute the
    cheapest feasible change (small universes only).
    """

    def __init__(self, message: str, min_budget=None, stage=None):
        super().__init__(message)
        self.min_budget = min_budget
        self.stage = stage


class TooLargeError(RestructError):
    exit_code = 4
