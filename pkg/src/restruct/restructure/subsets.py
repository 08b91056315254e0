"""Restructuring of knapsack subsets and multiple-choice selections."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from ..errors import InfeasibleWithBudgetError, InputError, InvalidInstanceError
from ..ids import id_key
from ..money import ZERO, Money
from ..solvers.knapsack import (
    GroupSelection,
    KnapsackInstance,
    MultipleChoiceInstance,
    SubsetSolution,
    solve_knapsack,
    solve_multiple_choice,
)
from .engine import Option, select
from .model import ChangeOp, OpKind, RestructurePlan, diff_sets

Costs = Mapping[Hashable, tuple[Money, Money]]

OBJECTIVES = ("max-profit", "min-proximity")


def _h(costs: Costs, i, which: int) -> Money:
    return Money.of(costs[i][which]) if i in costs else ZERO


def _check_budget(budget) -> Money:
    budget = Money.of(budget)
    if budget < ZERO:
        raise InputError("budget must be non-negative")
    return budget


def restructure_knapsack(
    s0: SubsetSolution | Iterable,
    goal: KnapsackInstance,
    costs: Costs,
    budget,
    objective: str = "max-profit",
    fixed: Iterable = (),
    top: int = 1,
) -> list[RestructurePlan] | RestructurePlan:
    """Delete and add items so the subset fits the goal instance and earns the most there.

    Only items with change costs may change, and ``fixed`` items never do.
    Items of ``s0`` that no longer exist at the goal stage must be deleted.
    The proximity reported is the gap to the unrestricted goal optimum, so
    ``min-proximity`` and ``max-profit`` select the same plan.

    Returns one plan, or a list of the best ``top`` plans when ``top > 1``.
    """
    if objective not in OBJECTIVES:
        raise InputError(f"unknown objective {objective!r}")
    budget = _check_budget(budget)
    current = frozenset(getattr(s0, "ids", s0))
    by_id = goal.by_id
    fixed = frozenset(fixed)
    changeable = frozenset(costs) - fixed

    options: list[Option] = []
    required = set()
    for i in sorted(current, key=id_key):
        if i not in by_id:
            # gone at the goal stage: forced deletion, whatever its status
            op = ChangeOp(OpKind.DELETE_ELEMENT, (i,), _h(costs, i, 0), ZERO, (id_key(i),))
            options.append(Option(op, 0, op.cost.tenths, 0, ("del", i)))
            required.add(("del", i))
        elif i in changeable:
            it = by_id[i]
            op = ChangeOp(OpKind.DELETE_ELEMENT, (i,), _h(costs, i, 0), -it.profit, (id_key(i),))
            options.append(Option(op, -it.profit.tenths, op.cost.tenths, -it.weight.tenths, ("del", i)))
    for it in goal.items:
        if it.id not in current and it.id in changeable:
            op = ChangeOp(OpKind.ADD_ELEMENT, (it.id,), _h(costs, it.id, 1), it.profit, (id_key(it.id),))
            options.append(Option(op, it.profit.tenths, op.cost.tenths, it.weight.tenths, ("add", it.id)))

    kept = current & by_id.keys()
    base_load = sum((by_id[i].weight for i in kept), ZERO)
    found = select(
        options,
        budget.tenths,
        room=goal.capacity.tenths,
        base_load=base_load.tenths,
        required=frozenset(required),
        top=max(1, top),
    )
    if not found:
        raise InfeasibleWithBudgetError(
            f"no subset fits capacity {goal.capacity} with change budget {budget}"
        )
    optimum = solve_knapsack(goal).profit
    plans = []
    for gain, sel in found:
        removed = {o.op.subject[0] for o in sel if o.op.kind is OpKind.DELETE_ELEMENT}
        added = {o.op.subject[0] for o in sel if o.op.kind is OpKind.ADD_ELEMENT}
        ids = (current - removed) | added
        sol = SubsetSolution.build(goal, ids)
        plans.append(
            RestructurePlan(
                ops=tuple(o.op for o in sel),
                solution=sol,
                cost=sum((o.op.cost for o in sel), ZERO),
                proximity=abs(optimum - sol.profit),
                objective=sol.profit,
                diff=diff_sets(current, ids),
            )
        )
    return plans if top > 1 else plans[0]


def restructure_multiple_choice(
    m0: GroupSelection | Iterable,
    goal: MultipleChoiceInstance,
    costs: Costs,
    budget,
    target: GroupSelection | Iterable | None = None,
    top: int = 1,
) -> list[RestructurePlan] | RestructurePlan:
    """Replace, add or drop one item per group within the change budget.

    Without ``target`` every replacement inside a group is a candidate op.
    With ``target`` each group offers only the single replacement that moves
    it to the target's item, which is the reduced problem built from the
    diff against a known goal solution.
    """
    budget = _check_budget(budget)
    chosen = tuple(getattr(m0, "chosen", m0))
    if len(chosen) != len(goal.groups):
        raise InvalidInstanceError("current selection must name one slot per group")
    aim = None
    if target is not None:
        aim = tuple(getattr(target, "chosen", target))
        if len(aim) != len(goal.groups):
            raise InvalidInstanceError("target selection must name one slot per group")

    options: list[Option] = []
    required = set()
    base_load = 0
    for gi, group in enumerate(goal.groups):
        items = {it.id: it for it in group}
        cur = chosen[gi]
        present = cur is None or cur in items
        if cur is not None and present:
            base_load += items[cur].weight.tenths
        cur_c = items[cur].profit.tenths if cur is not None and present else 0
        cur_a = items[cur].weight.tenths if cur is not None and present else 0
        if not present:
            required.add(gi)
        if aim is not None:
            wanted = [aim[gi]] if aim[gi] != cur else []
        else:
            wanted = [it.id for it in group if it.id != cur] + ([None] if cur is not None else [])
        for new in wanted:
            if new is not None and new not in items:
                raise InvalidInstanceError(f"{new!r} is not in group {goal.names[gi]}")
            h = (_h(costs, cur, 0) if cur is not None else ZERO) + (_h(costs, new, 1) if new is not None else ZERO)
            new_c = items[new].profit.tenths if new is not None else 0
            new_a = items[new].weight.tenths if new is not None else 0
            if cur is None:
                kind, subject = OpKind.ADD_ELEMENT, (new,)
            elif new is None:
                kind, subject = OpKind.DELETE_ELEMENT, (cur,)
            else:
                kind, subject = OpKind.REPLACE_IN_GROUP, (cur, new)
            op = ChangeOp(kind, subject, h, Money(new_c - cur_c), (gi,), f"{goal.names[gi]}:{'->'.join(map(str, subject))}")
            options.append(Option(op, new_c - cur_c, h.tenths, new_a - cur_a, gi))
    missing = required - {o.group for o in options}
    if missing:
        names = ", ".join(goal.names[g] for g in sorted(missing))
        raise InfeasibleWithBudgetError(f"no replacement available for groups {names}")

    found = select(
        options,
        budget.tenths,
        room=goal.capacity.tenths,
        base_load=base_load,
        required=frozenset(required),
        top=max(1, top),
    )
    if not found:
        raise InfeasibleWithBudgetError(f"no valid selection within change budget {budget}")
    optimum = solve_multiple_choice(goal).profit
    plans = []
    for gain, sel in found:
        after = list(chosen)
        for o in sel:
            gi = o.group
            after[gi] = None if o.op.kind is OpKind.DELETE_ELEMENT else o.op.subject[-1]
        sol = GroupSelection.build(goal, after)
        plans.append(
            RestructurePlan(
                ops=tuple(o.op for o in sel),
                solution=sol,
                cost=sum((o.op.cost for o in sel), ZERO),
                proximity=abs(optimum - sol.profit),
                objective=sol.profit,
                diff=diff_sets((c for c in chosen if c is not None), sol.ids),
            )
        )
    return plans if top > 1 else plans[0]
