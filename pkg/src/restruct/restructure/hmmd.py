"""Restructuring of morphological composites.

A composite ``T0`` is moved to an admissible composite ``T*`` of the goal
system by changing DAs component by component. The change cost ``H`` counts
changed components, or sums per-DA deletion and addition costs when the
budget is money. The proximity to the goal is the pair ``(rho1, rho2)``:
element improvement steps and compatibility improvement steps separating
``N(T*)`` from the goal reference. Plans are kept when no other plan is at
least as good on ``H``, ``rho1`` and ``rho2`` and better on one.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from ..errors import InfeasibleError, InfeasibleWithBudgetError, InputError, InvalidChoiceError
from ..money import ZERO, Money
from ..scales import (
    CompatibilityValue,
    QualityVector,
    compat_improvement_steps,
    element_improvement_steps,
    pareto_front_min,
)
from ..solvers.hmmd import CompositeSolution, MorphSystem, admissible_composites, hmmd_synthesize
from .model import ChangeOp, OpKind, RestructurePlan


def goal_reference(goal: MorphSystem) -> QualityVector:
    """Ideal point of the goal front: its best ``w`` with its least-deficient ``n``."""
    front = hmmd_synthesize(goal)
    w = max(c.quality.w.w for c in front)
    n = min(front, key=lambda c: c.quality.n.deficiency()).quality.n
    return QualityVector(CompatibilityValue(w, goal.l), n)


def hmmd_proximity(q: QualityVector, ref: QualityVector) -> tuple[int, int]:
    return element_improvement_steps(q.n, ref.n), compat_improvement_steps(q.w, ref.w)


def change_ops(before: Sequence[str], after: Sequence[str], costs: Mapping | None = None) -> list[ChangeOp]:
    ops = []
    for pos, (a, b) in enumerate(zip(before, after)):
        if a != b:
            if costs is None:
                cost = 1
            else:
                cost = (costs[a][0] if a in costs else ZERO) + (costs[b][1] if b in costs else ZERO)
            ops.append(ChangeOp(OpKind.CHANGE_DA, (a, b), cost, 0, (pos,)))
    return ops


def change_count(before: Sequence[str], after: Sequence[str]) -> int:
    if len(before) != len(after):
        raise InvalidChoiceError("composites have different component counts")
    return sum(1 for a, b in zip(before, after) if a != b)


def restructure_hmmd(
    t0: CompositeSolution | Sequence[str],
    goal: MorphSystem,
    budget: int | Money | str | None = None,
    costs: Mapping | None = None,
    reference: QualityVector | None = None,
) -> tuple[RestructurePlan, ...]:
    """Pareto-efficient restructurings of ``t0`` into the goal system.

    ``budget`` as an ``int`` caps the number of changed components; as
    :class:`Money` (or a decimal string) it caps the summed per-DA costs in
    ``costs``. ``None`` means no cap. ``reference`` defaults to
    :func:`goal_reference`.
    """
    before = tuple(getattr(t0, "choice", t0))
    if len(before) != goal.m:
        raise InvalidChoiceError(f"composite has {len(before)} DAs, goal system has {goal.m} components")
    if budget is None:
        unit, cap = "ops", None
    elif isinstance(budget, int) and not isinstance(budget, bool):
        unit, cap = "ops", budget
    else:
        unit, cap = "money", Money.of(budget)
        if costs is None:
            raise InputError("a money budget needs per-DA change costs")
    if cap is not None and cap < 0:
        raise InputError("budget must be non-negative")
    ref = reference if reference is not None else goal_reference(goal)

    pool = list(admissible_composites(goal))
    if not pool:
        raise InfeasibleError("goal system has no admissible composite")
    rows = []
    for comp in pool:
        ops = change_ops(before, comp.choice, costs if unit == "money" else None)
        spent = len(ops) if unit == "ops" else sum((op.cost for op in ops), ZERO)
        if cap is not None and spent > cap:
            continue
        rho = hmmd_proximity(comp.quality, ref)
        rows.append((comp, ops, spent, rho))
    if not rows:
        raise InfeasibleWithBudgetError(f"no admissible composite within budget {budget}")
    vectors = [(i, (r[2] if unit == "ops" else r[2].tenths, *r[3])) for i, r in enumerate(rows)]
    keep = pareto_front_min(vectors)
    chosen = sorted((rows[i] for i in keep), key=lambda r: (r[2], r[3], r[0].choice))
    return tuple(
        RestructurePlan(
            ops=tuple(ops),
            solution=comp,
            cost=spent,
            proximity=rho,
            objective=comp.quality,
            budget_unit=unit,
        )
        for comp, ops, spent, rho in chosen
    )
