"""Restructuring trajectories over several stages.

Three ways to build ``<S0, S1*, ..., Sn*>``:

* series: restructure greedily, stage after stage;
* composition: keep the best ``q_i`` candidates per stage and pick one per
  stage by dynamic programming on a weighted sum of change costs and
  proximities (the change cost of a stage depends on the predecessor);
* composition and selection: build every trajectory through the candidate
  sets and keep the Pareto-efficient ones over ``(H~, rho~)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Mapping, Protocol, Sequence

from .errors import EmptyInputError, InfeasibleError, InfeasibleWithBudgetError, InputError
from .ids import sorted_ids
from .money import Money, as_number
from .restructure import (
    restructure_hmmd,
    restructure_knapsack,
    restructure_multiple_choice,
)
from .restructure.hmmd import change_count, change_ops, goal_reference, hmmd_proximity
from .restructure.model import RestructurePlan
from .scales import pareto_front_min
from .solvers.hmmd import CompositeSolution, MorphSystem, evaluate_composite
from .solvers.knapsack import KnapsackInstance, MultipleChoiceInstance


@dataclass(frozen=True)
class StageStep:
    solution: Any
    cost: Any  # H from the previous solution
    proximity: tuple  # rho against this stage's goal
    label: str
    plan: RestructurePlan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Trajectory:
    start: Any
    steps: tuple[StageStep, ...] = ()
    start_label: str = "S0"

    @property
    def costs(self) -> tuple:
        return tuple(s.cost for s in self.steps)

    @property
    def proximities(self) -> tuple:
        return tuple(s.proximity for s in self.steps)

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.start_label,) + tuple(s.label for s in self.steps)

    @property
    def end(self):
        return self.steps[-1].solution if self.steps else self.start

    def concat(self, other: "Trajectory") -> "Trajectory":
        """Append ``other``'s stages; ``other`` must start where this one ends."""
        if other.start != self.end:
            raise InputError("trajectories do not meet")
        return Trajectory(self.start, self.steps + other.steps, self.start_label)


def _vector(p) -> tuple:
    if p is None:
        return ()
    return tuple(p) if isinstance(p, tuple) else (p,)


def _add(a: tuple, b: tuple) -> tuple:
    if not a:
        return tuple(b)
    if not b:
        return tuple(a)
    if len(a) != len(b):
        raise InputError("proximity vectors of different length")
    return tuple(x + y for x, y in zip(a, b))


def aggregate(traj: Trajectory | Sequence[StageStep]) -> tuple[Any, tuple]:
    """``(H~, rho~)``: summed stage costs and componentwise summed proximities."""
    steps = traj.steps if isinstance(traj, Trajectory) else tuple(traj)
    h = 0
    rho: tuple = ()
    for s in steps:
        h = h + s.cost
        rho = _add(rho, _vector(s.proximity))
    return h, rho


def scalarize(h, rho: tuple, weights: Sequence | None = None) -> Fraction:
    vals = [as_number(h)] + [as_number(x) for x in rho]
    ws = list(weights) if weights is not None else [1] * len(vals)
    if len(ws) < len(vals):
        ws = ws + [1] * (len(vals) - len(ws))
    return sum((Fraction(w) * v for w, v in zip(ws, vals)), Fraction(0))


def _sortable(x):
    return as_number(x) if isinstance(x, (Money, int)) else x


# stage models ---------------------------------------------------------------


class StageModel(Protocol):
    n_stages: int

    def steps(self, prev: Any, stage: int, budget: Any, q: int) -> list[StageStep]:
        """Up to ``q`` best restructurings of ``prev`` at ``stage``, best first."""


def _as_list(found) -> list:
    return list(found) if isinstance(found, list) else [found]


def _subset_label(ids) -> str:
    return "{" + ",".join(str(i) for i in sorted_ids(ids)) + "}"


@dataclass
class KnapsackStages:
    stages: Sequence[KnapsackInstance]
    costs: Sequence[Mapping]
    fixed: frozenset = frozenset()
    objective: str = "max-profit"

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def steps(self, prev, stage, budget, q):
        plans = _as_list(
            restructure_knapsack(prev, self.stages[stage], self.costs[stage], budget, self.objective, self.fixed, top=q)
        )
        return [StageStep(p.solution.ids, p.cost, (p.proximity,), _subset_label(p.solution.ids), p) for p in plans]


@dataclass
class MultipleChoiceStages:
    stages: Sequence[MultipleChoiceInstance]
    costs: Sequence[Mapping]
    targets: Sequence | None = None

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def steps(self, prev, stage, budget, q):
        target = self.targets[stage] if self.targets else None
        plans = _as_list(
            restructure_multiple_choice(prev, self.stages[stage], self.costs[stage], budget, target, top=q)
        )
        return [
            StageStep(p.solution.chosen, p.cost, (p.proximity,), "*".join(str(c) for c in p.solution.chosen), p)
            for p in plans
        ]


@dataclass
class HmmdStages:
    """Candidates are the Pareto-efficient restructurings at each stage."""

    systems: Sequence[MorphSystem]
    costs: Sequence[Mapping] | None = None

    @property
    def n_stages(self) -> int:
        return len(self.systems)

    def steps(self, prev, stage, budget, q):
        costs = self.costs[stage] if self.costs else None
        plans = restructure_hmmd(prev, self.systems[stage], budget, costs)
        return [StageStep(p.solution.choice, p.cost, p.proximity, p.solution.label(), p) for p in plans[:q]]


@dataclass
class CandidateStages:
    """Explicit per-stage candidate composites, as chosen by an expert.

    ``candidates[i]`` maps a label to a DA tuple for stage ``i``. ``parents``
    optionally restricts which earlier candidate (or ``start_label``) each
    candidate may follow; without it every pairing is allowed.
    """

    systems: Sequence[MorphSystem]
    candidates: Sequence[Mapping[str, tuple]]
    parents: Mapping[str, Sequence[str]] | None = None
    start_label: str = "S0"

    def __post_init__(self):
        self._refs = [goal_reference(s) for s in self.systems]
        self._labels = {}
        for stage, cands in enumerate(self.candidates):
            for label, choice in cands.items():
                evaluate_composite(self.systems[stage], choice)  # validates
                self._labels[(stage, tuple(choice))] = label

    @property
    def n_stages(self) -> int:
        return len(self.systems)

    def label_of(self, stage: int, choice) -> str:
        if stage < 0:
            return self.start_label
        return self._labels[(stage, tuple(choice))]

    def steps(self, prev, stage, budget, q):
        prev = tuple(prev)
        prev_label = self.label_of(stage - 1, prev) if stage > 0 else self.start_label
        out = []
        for label, choice in self.candidates[stage].items():
            if self.parents is not None and prev_label not in self.parents.get(label, ()):
                continue
            h = change_count(prev, choice)
            if budget is not None and h > budget:
                continue
            q_vec = evaluate_composite(self.systems[stage], choice)
            if q_vec.w.w < 1:
                continue
            rho = hmmd_proximity(q_vec, self._refs[stage])
            plan = RestructurePlan(
                ops=tuple(change_ops(prev, choice)),
                solution=CompositeSolution(tuple(choice), q_vec),
                cost=h,
                proximity=rho,
                objective=q_vec,
                budget_unit="ops",
            )
            out.append(StageStep(tuple(choice), h, rho, label, plan))
        out.sort(key=lambda s: (s.cost, s.proximity, s.label))
        return out[:q]


# schemes --------------------------------------------------------------------


def _budgets(model: StageModel, budgets: Sequence | None) -> list:
    if budgets is None:
        return [None] * model.n_stages
    if len(budgets) != model.n_stages:
        raise InputError(f"{len(budgets)} budgets for {model.n_stages} stages")
    return list(budgets)


def _start(model, label):
    return label if label is not None else getattr(model, "start_label", "S0")


def _steps(model, prev, stage, budget, q) -> list[StageStep]:
    try:
        found = model.steps(prev, stage, budget, q)
    except InfeasibleWithBudgetError as exc:
        raise InfeasibleWithBudgetError(f"stage {stage + 1}: {exc}", exc.min_budget, stage + 1) from exc
    except InfeasibleError as exc:
        raise InfeasibleWithBudgetError(f"stage {stage + 1}: {exc}", None, stage + 1) from exc
    return found


def scheme1_series(s0, model: StageModel, budgets: Sequence | None = None, start_label: str | None = None) -> Trajectory:
    """Greedy series: each stage restructures the previous stage's result."""
    start_label = _start(model, start_label)
    steps = []
    cur = s0
    for stage, budget in enumerate(_budgets(model, budgets)):
        found = _steps(model, cur, stage, budget, 1)
        if not found:
            raise InfeasibleWithBudgetError(f"stage {stage + 1}: no candidate", None, stage + 1)
        steps.append(found[0])
        cur = found[0].solution
    return Trajectory(s0, tuple(steps), start_label)


def _q(candidates: Sequence[int] | int | None, n: int) -> list[int]:
    if candidates is None:
        return [1] * n
    if isinstance(candidates, int):
        return [candidates] * n
    if len(candidates) != n:
        raise InputError(f"{len(candidates)} candidate counts for {n} stages")
    if any(q < 1 for q in candidates):
        raise InputError("candidate counts must be at least 1")
    return list(candidates)


def _traj_key(t: Trajectory, weights):
    h, rho = aggregate(t)
    return (scalarize(h, rho, weights), _sortable(h), tuple(_sortable(x) for x in rho), t.labels)


def scheme2_compose(
    s0,
    model: StageModel,
    budgets: Sequence | None = None,
    candidates: Sequence[int] | int | None = None,
    weights: Sequence | None = None,
    start_label: str | None = None,
) -> Trajectory:
    """Composition by stage-wise dynamic programming.

    Each kept solution at stage ``i - 1`` proposes its best ``q_i``
    restructurings; a stage-``i`` solution remembers only its best path by
    ``(weighted sum, H~, rho~, labels)``.
    """
    budgets = _budgets(model, budgets)
    qs = _q(candidates, model.n_stages)
    start_label = _start(model, start_label)
    layer: dict[Hashable, Trajectory] = {_freeze(s0): Trajectory(s0, (), start_label)}
    for stage in range(model.n_stages):
        nxt: dict[Hashable, Trajectory] = {}
        for traj in sorted(layer.values(), key=lambda t: _traj_key(t, weights)):
            for step in _steps(model, traj.end, stage, budgets[stage], qs[stage]):
                cand = Trajectory(s0, traj.steps + (step,), start_label)
                key = _freeze(step.solution)
                if key not in nxt or _traj_key(cand, weights) < _traj_key(nxt[key], weights):
                    nxt[key] = cand
        if not nxt:
            raise InfeasibleWithBudgetError(f"stage {stage + 1}: empty candidate set", None, stage + 1)
        layer = nxt
    return min(layer.values(), key=lambda t: _traj_key(t, weights))


def _freeze(sol) -> Hashable:
    # dedup key for a stage state; assignments arrive as dicts, partitions as nested lists
    if isinstance(sol, (set, frozenset)):
        return frozenset(_freeze(x) for x in sol)
    if isinstance(sol, Mapping):
        return frozenset((k, _freeze(v)) for k, v in sol.items())
    if isinstance(sol, (list, tuple)):
        return tuple(_freeze(x) for x in sol)
    return sol


def compose_trajectories(
    s0,
    model: StageModel,
    budgets: Sequence | None = None,
    candidates: Sequence[int] | int | None = None,
    start_label: str | None = None,
    limit: int = 10**5,
) -> list[Trajectory]:
    """Every trajectory through the per-predecessor candidate sets."""
    budgets = _budgets(model, budgets)
    start_label = _start(model, start_label)
    qs = _q(candidates, model.n_stages) if candidates is not None else [10**9] * model.n_stages
    frontier = [Trajectory(s0, (), start_label)]
    for stage in range(model.n_stages):
        grown = []
        for traj in frontier:
            for step in _steps(model, traj.end, stage, budgets[stage], qs[stage]):
                grown.append(Trajectory(s0, traj.steps + (step,), start_label))
                if len(grown) > limit:
                    raise InputError(f"more than {limit} trajectories")
        if not grown:
            raise InfeasibleWithBudgetError(f"stage {stage + 1}: no trajectory continues", None, stage + 1)
        frontier = grown
    return frontier


def trajectory_vector(t: Trajectory) -> tuple:
    h, rho = aggregate(t)
    return (as_number(h),) + tuple(as_number(x) for x in rho)


def scheme3_select(trajectories: Sequence[Trajectory]) -> list[Trajectory]:
    """Pareto-efficient trajectories over ``(H~, rho~...)``, in input order."""
    if not trajectories:
        raise EmptyInputError("no trajectories to select from")
    items = [(i, trajectory_vector(t)) for i, t in enumerate(trajectories)]
    return [trajectories[i] for i in pareto_front_min(items)]
