"""Restructuring of assignments: move elements to new positions within a budget."""

from __future__ import annotations

from collections import Counter
from typing import Hashable, Mapping, Sequence

from ..errors import InfeasibleWithBudgetError, InputError, InvalidInstanceError, InvalidOpsError
from ..ids import id_key
from ..money import ZERO, Money
from ..solvers.assignment import AssignmentInstance, Permutation, solve_assignment
from .engine import Option, select
from .model import ChangeOp, OpKind, RestructurePlan, diff_sets, plan_key

PairCosts = Mapping[tuple, tuple[Money, Money]]  # (element, position) -> (h-, h+)


def reassignment_op(element, old, new, costs: PairCosts, profit: Mapping[tuple, Money], label=None) -> ChangeOp:
    """Move ``element`` from ``old`` to ``new``.

    Cost is the deletion cost at the old slot plus the addition cost at the
    new one; profit is the goal-stage profit of the new slot.
    """
    if old == new:
        raise InvalidOpsError(f"op on {element!r} does not move it")
    cost = Money.of(costs[(element, old)][0]) + Money.of(costs[(element, new)][1])
    return ChangeOp(
        OpKind.REASSIGN_POSITION,
        (element, old, new),
        cost,
        Money.of(profit[(element, new)]),
        (id_key(element),),
        label,
    )


def _as_map(s1) -> dict:
    if isinstance(s1, Permutation):
        return {i + 1: p for i, p in enumerate(s1.s)}
    return dict(s1)


def restructure_assignment(
    s1: Permutation | Mapping,
    ops: Sequence[ChangeOp] | None,
    budget,
    *,
    goal: AssignmentInstance | None = None,
    costs: PairCosts | None = None,
    capacity: Mapping[Hashable, int] | None = None,
    top: int = 1,
):
    """Select reassignment ops under the budget.

    With explicit ``ops`` (at most one per element) the objective is the sum
    of the selected ops' profits and the result must respect ``capacity``
    (positions as capacitated slots) or stay a permutation when ``s1`` is a
    :class:`Permutation`. With ``ops=None`` every permutation is reachable,
    ``goal`` and ``costs`` are required, and the objective is the goal-stage
    assignment profit.
    """
    budget = Money.of(budget)
    if budget < ZERO:
        raise InputError("budget must be non-negative")
    if ops is None:
        if not isinstance(s1, Permutation) or goal is None or costs is None:
            raise InputError("the full permutation universe needs a Permutation, goal and costs")
        return _full_universe(s1, goal, costs, budget, top)

    current = _as_map(s1)
    seen = set()
    for op in ops:
        if op.kind is not OpKind.REASSIGN_POSITION or len(op.subject) != 3:
            raise InvalidOpsError(f"not a reassignment op: {op.describe()}")
        e, old, _ = op.subject
        if e in seen:
            raise InvalidOpsError(f"more than one op on element {e!r}")
        if current.get(e) != old:
            raise InvalidOpsError(f"op {op.describe()} does not start from {e!r}'s current position")
        seen.add(e)

    def valid(sel) -> bool:
        after = dict(current)
        for o in sel:
            e, _, new = o.op.subject
            after[e] = new
        load = Counter(after.values())
        if isinstance(s1, Permutation):
            return len(load) == len(after)
        if capacity is not None:
            return all(n <= capacity.get(p, 0) for p, n in load.items())
        return True

    options = [Option(op, Money.of(op.profit).tenths, Money.of(op.cost).tenths, 0, op.subject[0]) for op in ops]
    found = select(options, budget.tenths, valid=valid, top=max(1, top))
    if not found:
        raise InfeasibleWithBudgetError(f"no valid reassignment within budget {budget}")
    plans = []
    for gain, sel in found:
        after = dict(current)
        for o in sel:
            after[o.op.subject[0]] = o.op.subject[2]
        sol = Permutation(tuple(after[i + 1] for i in range(len(after)))) if isinstance(s1, Permutation) else after
        plans.append(
            RestructurePlan(
                ops=tuple(o.op for o in sel),
                solution=sol,
                cost=sum((o.op.cost for o in sel), ZERO),
                proximity=None,
                objective=Money(gain),
                diff=diff_sets(current.items(), after.items()),
            )
        )
    return plans if top > 1 else plans[0]


def _full_universe(s1: Permutation, goal: AssignmentInstance, costs: PairCosts, budget: Money, top: int):
    n = goal.n
    if len(s1.s) != n:
        raise InvalidInstanceError("current permutation and goal matrix differ in size")
    c = [[v.tenths for v in row] for row in goal.profit]

    def step_cost(i, p) -> int:
        old = s1.s[i]
        if p == old:
            return 0
        return Money.of(costs[(i + 1, old)][0]).tenths + Money.of(costs[(i + 1, p)][1]).tenths

    row_best = [max(r) if r else 0 for r in c]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + row_best[i]

    kept: list = []
    s: list[int] = []

    def ops_of(perm):
        out = []
        for i, p in enumerate(perm):
            if p != s1.s[i]:
                out.append(
                    ChangeOp(
                        OpKind.REASSIGN_POSITION,
                        (i + 1, s1.s[i], p),
                        Money(step_cost(i, p)),
                        Money(c[i][p - 1] - c[i][s1.s[i] - 1]),
                        ((0, i + 1),),
                    )
                )
        return out

    def dfs(i, value, cost, used):
        if cost > budget.tenths:
            return
        if len(kept) >= top and value + suffix[i] < kept[-1][1]:
            return
        if i == n:
            ops = ops_of(s)
            kept.append((plan_key(value, ops, cost), value, tuple(s), ops))
            kept.sort(key=lambda t: t[0])
            del kept[top:]
            return
        for p in range(1, n + 1):
            if p not in used:
                s.append(p)
                used.add(p)
                dfs(i + 1, value + c[i][p - 1], cost + step_cost(i, p), used)
                used.discard(p)
                s.pop()

    dfs(0, 0, 0, set())
    if not kept:
        raise InfeasibleWithBudgetError(f"no permutation reachable within budget {budget}")
    plans = []
    optimum = goal.value(solve_assignment(goal).s)
    before = {i + 1: p for i, p in enumerate(s1.s)}
    for _, value, perm, ops in kept:
        after = {i + 1: p for i, p in enumerate(perm)}
        plans.append(
            RestructurePlan(
                ops=tuple(ops),
                solution=Permutation(perm),
                cost=sum((o.cost for o in ops), ZERO),
                proximity=optimum - Money(value),
                objective=Money(value),
                diff=diff_sets(before.items(), after.items()),
            )
        )
    return plans if top > 1 else plans[0]
