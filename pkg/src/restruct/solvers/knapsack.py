"""0/1 knapsack and multiple-choice knapsack, solved exactly by branch and bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from ..errors import InvalidInstanceError
from ..ids import id_key, ids_key
from ..money import ZERO, Money


@dataclass(frozen=True)
class Item:
    id: Hashable
    profit: Money
    weight: Money


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple[Item, ...]
    capacity: Money

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if self.capacity < ZERO:
            raise InvalidInstanceError(f"negative capacity {self.capacity}")
        seen = set()
        for it in self.items:
            if it.weight < ZERO:
                raise InvalidInstanceError(f"item {it.id!r} has negative weight")
            if it.id in seen:
                raise InvalidInstanceError(f"duplicate item id {it.id!r}")
            seen.add(it.id)

    def item(self, item_id) -> Item:
        for it in self.items:
            if it.id == item_id:
                return it
        raise KeyError(item_id)

    @property
    def by_id(self) -> dict:
        return {it.id: it for it in self.items}


@dataclass(frozen=True)
class SubsetSolution:
    ids: frozenset
    profit: Money = ZERO
    weight: Money = ZERO

    @classmethod
    def build(cls, inst: KnapsackInstance, ids: Iterable) -> "SubsetSolution":
        by_id = inst.by_id
        ids = frozenset(ids)
        return cls(
            ids,
            sum((by_id[i].profit for i in ids), ZERO),
            sum((by_id[i].weight for i in ids), ZERO),
        )


def _bnb(profits: Sequence[int], weights: Sequence[int], capacity: int, order_key) -> tuple[int, list[int]]:
    """Depth-first branch and bound over integer data.

    Returns (best value, chosen indices). Among equal-value optima the one
    minimising ``order_key(indices)`` is returned, so nodes whose bound ties
    the incumbent are still explored.
    """
    n = len(profits)
    zero_w = [i for i in range(n) if weights[i] == 0]
    rest = [i for i in range(n) if weights[i] > 0]
    # ratio order for the fractional bound; ids only break ratio ties
    rest.sort(key=lambda i: (-profits[i] / weights[i], i))

    best_val = -1
    best_sel: list[int] = []

    def bound_below(pos: int, value: int, room: int, target: int) -> bool:
        # True when the fractional relaxation cannot reach ``target``.
        acc = value
        for j in range(pos, len(rest)):
            i = rest[j]
            if profits[i] <= 0:
                break
            if weights[i] <= room:
                room -= weights[i]
                acc += profits[i]
            else:
                # acc + room * p / w < target  <=>  acc*w + room*p < target*w
                return acc * weights[i] + room * profits[i] < target * weights[i]
        return acc < target

    def dfs(pos: int, value: int, room: int, chosen: list[int]):
        nonlocal best_val, best_sel
        if pos == len(rest):
            if value > best_val or (value == best_val and order_key(chosen) < order_key(best_sel)):
                best_val, best_sel = value, list(chosen)
            return
        if best_val >= 0 and bound_below(pos, value, room, best_val):
            return
        i = rest[pos]
        if weights[i] <= room:
            chosen.append(i)
            dfs(pos + 1, value + profits[i], room - weights[i], chosen)
            chosen.pop()
        dfs(pos + 1, value, room, chosen)

    # Zero-weight items with positive profit are always taken. The rest join the
    # search at the tail, where only the tie-break decides them.
    base = [i for i in zero_w if profits[i] > 0]
    rest = rest + [i for i in zero_w if profits[i] <= 0]
    dfs(0, sum(profits[i] for i in base), capacity, list(base))
    return best_val, best_sel


def solve_knapsack(inst: KnapsackInstance) -> SubsetSolution:
    items = inst.items
    profits = [it.profit.tenths for it in items]
    weights = [it.weight.tenths for it in items]

    def order_key(sel):
        return ids_key(items[i].id for i in sel)

    _, sel = _bnb(profits, weights, inst.capacity.tenths, order_key)
    return SubsetSolution.build(inst, (items[i].id for i in sel))


@dataclass(frozen=True)
class MultipleChoiceInstance:
    groups: tuple[tuple[Item, ...], ...]
    capacity: Money
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        groups = tuple(tuple(g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        if not self.names:
            object.__setattr__(self, "names", tuple(f"A{i + 1}" for i in range(len(groups))))
        elif len(self.names) != len(groups):
            raise InvalidInstanceError("one name per group required")
        if self.capacity < ZERO:
            raise InvalidInstanceError(f"negative capacity {self.capacity}")
        seen = set()
        for g in groups:
            for it in g:
                if it.id in seen:
                    raise InvalidInstanceError(f"item {it.id!r} appears in more than one group")
                if it.weight < ZERO:
                    raise InvalidInstanceError(f"item {it.id!r} has negative weight")
                seen.add(it.id)

    def group_of(self, item_id) -> int:
        for gi, g in enumerate(self.groups):
            if any(it.id == item_id for it in g):
                return gi
        raise KeyError(item_id)

    @property
    def by_id(self) -> dict:
        return {it.id: it for g in self.groups for it in g}


@dataclass(frozen=True)
class GroupSelection:
    chosen: tuple  # one entry per group: item id or None
    profit: Money = ZERO
    weight: Money = ZERO

    @classmethod
    def build(cls, inst: MultipleChoiceInstance, chosen: Sequence) -> "GroupSelection":
        by_id = inst.by_id
        chosen = tuple(chosen)
        if len(chosen) != len(inst.groups):
            raise InvalidInstanceError("selection must name one slot per group")
        for gi, c in enumerate(chosen):
            if c is not None and all(it.id != c for it in inst.groups[gi]):
                raise InvalidInstanceError(f"{c!r} is not in group {inst.names[gi]}")
        picked = [by_id[c] for c in chosen if c is not None]
        return cls(chosen, sum((i.profit for i in picked), ZERO), sum((i.weight for i in picked), ZERO))

    @property
    def ids(self) -> frozenset:
        return frozenset(c for c in self.chosen if c is not None)


def solve_multiple_choice(inst: MultipleChoiceInstance) -> GroupSelection:
    """Best selection with at most one item per group under the capacity."""
    groups = inst.groups
    cap = inst.capacity.tenths
    # optimistic gain per remaining suffix of groups, ignoring capacity
    best_in = [max([0] + [it.profit.tenths for it in g]) for g in groups]
    suffix = [0] * (len(groups) + 1)
    for gi in range(len(groups) - 1, -1, -1):
        suffix[gi] = suffix[gi + 1] + best_in[gi]

    best_val = -1
    best_pick: list = []

    def key(pick):
        return ids_key(c for c in pick if c is not None)

    def dfs(gi: int, value: int, room: int, pick: list):
        nonlocal best_val, best_pick
        if gi == len(groups):
            if value > best_val or (value == best_val and key(pick) < key(best_pick)):
                best_val, best_pick = value, list(pick)
            return
        if value + suffix[gi] < best_val:
            return
        options = sorted(groups[gi], key=lambda it: (-it.profit.tenths, id_key(it.id)))
        for it in options:
            if it.weight.tenths <= room:
                pick.append(it.id)
                dfs(gi + 1, value + it.profit.tenths, room - it.weight.tenths, pick)
                pick.pop()
        pick.append(None)
        dfs(gi + 1, value, room, pick)
        pick.pop()

    dfs(0, 0, cap, [])
    return GroupSelection.build(inst, best_pick)


def knapsack_from_rows(rows: Iterable[tuple], capacity) -> KnapsackInstance:
    """Convenience constructor from ``(id, profit, weight)`` rows."""
    return KnapsackInstance(
        tuple(Item(i, Money.of(c), Money.of(a)) for i, c, a in rows), Money.of(capacity)
    )


def profits_of(inst: KnapsackInstance) -> Mapping:
    return {it.id: it.profit for it in inst.items}
