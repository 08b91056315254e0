"""Change operations, solution diffs and restructuring plans."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping

from ..errors import InputError
from ..ids import id_key, sorted_ids
from ..money import ZERO, Money


class OpKind(enum.Enum):
    DELETE_ELEMENT = "delete"
    ADD_ELEMENT = "add"
    REPLACE_IN_GROUP = "replace"
    MOVE_BETWEEN_CLUSTERS = "move"
    REASSIGN_POSITION = "reassign"
    DELETE_EDGE = "delete-edge"
    ADD_EDGE = "add-edge"
    DELETE_STEINER_VERTEX = "delete-steiner"
    ADD_STEINER_VERTEX = "add-steiner"
    CHANGE_DA = "change-da"


@dataclass(frozen=True)
class ChangeOp:
    """One atomic edit.

    ``subject`` names what is touched: ``(id,)`` for plain deletions and
    additions, ``(old, new)`` for replacements, ``(element, src, dst)`` for
    moves and reassignments. ``order`` is the position of the touched group or
    element and feeds the tie-break.
    """

    kind: OpKind
    subject: tuple
    cost: Money | int = ZERO
    profit: Money | int = ZERO
    order: tuple = ()
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "subject", tuple(self.subject))
        if self.cost < 0:
            raise InputError(f"negative change cost on {self.describe()}")

    def describe(self) -> str:
        if self.label:
            return self.label
        return f"{self.kind.value}:" + "->".join(str(s) for s in self.subject)

    def sort_key(self):
        return (self.order, self.kind.value, id_key(self.subject))


def op_order(ops: Iterable[ChangeOp]) -> list[ChangeOp]:
    return sorted(ops, key=ChangeOp.sort_key)


@dataclass(frozen=True)
class SolutionDiff:
    deleted: frozenset
    added: frozenset

    def __post_init__(self):
        object.__setattr__(self, "deleted", frozenset(self.deleted))
        object.__setattr__(self, "added", frozenset(self.added))
        if self.deleted & self.added:
            raise InputError("an element cannot be both deleted and added")

    def apply(self, before: Iterable) -> frozenset:
        return (frozenset(before) - self.deleted) | self.added

    @property
    def empty(self) -> bool:
        return not self.deleted and not self.added


def diff_sets(before: Iterable, after: Iterable) -> SolutionDiff:
    b, a = frozenset(before), frozenset(after)
    return SolutionDiff(b - a, a - b)


def diff_subsets(before, after) -> SolutionDiff:
    """Diff of two subset-like solutions (anything with ``.ids`` or a plain set)."""
    return diff_sets(getattr(before, "ids", before), getattr(after, "ids", after))


@dataclass(frozen=True)
class ElementSetDelta:
    removed: frozenset
    added: frozenset
    fixed: frozenset


def element_set_delta(a0: Iterable, a1: Iterable) -> ElementSetDelta:
    a0, a1 = frozenset(a0), frozenset(a1)
    fixed = a0 & a1
    return ElementSetDelta(a0 - fixed, a1 - fixed, fixed)


def change_cost(diff: SolutionDiff, costs: Mapping[Hashable, tuple[Money, Money]]) -> Money:
    """H over a realized diff: deletion costs of what leaves, addition costs of what enters."""
    h = ZERO
    for i in diff.deleted:
        h += costs[i][0] if i in costs else ZERO
    for i in diff.added:
        h += costs[i][1] if i in costs else ZERO
    return h


@dataclass(frozen=True)
class RestructurePlan:
    ops: tuple[ChangeOp, ...]
    solution: Any
    cost: Money | int
    proximity: Any
    objective: Any = None
    diff: SolutionDiff | None = None
    steiner_diff: SolutionDiff | None = None
    budget_unit: str = "money"
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(op_order(self.ops)))


def plan_key(gain, ops: Iterable[ChangeOp], cost, tail=()):
    """Shared ranking for equal-objective restructuring plans.

    Higher gain first, then fewer ops, then ops touching earlier groups, then
    lower cost, then the ops themselves.
    """
    ops = op_order(ops)
    return (-gain, len(ops), sorted(op.order for op in ops), cost, [op.sort_key() for op in ops], tail)


def costs_from_pairs(pairs: Mapping[Hashable, tuple]) -> dict:
    return {k: (Money.of(m), Money.of(p)) for k, (m, p) in pairs.items()}


def describe_ids(ids: Iterable) -> list:
    return sorted_ids(ids)
