"""``restruct`` command line: solve a stage, restructure between stages, build trajectories.

Exit codes: 0 success, 1 internal error, 2 bad input, 3 infeasible,
4 instance above a size cap.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import __version__
from .errors import InfeasibleError, InfeasibleWithBudgetError, InputError, RestructError, TooLargeError
from .io import (
    InstanceDocument,
    assignment_stage,
    clustering_stage,
    dumps,
    hmmd_stage,
    knapsack_stage,
    load_document,
    multiple_choice_stage,
    plan_json,
    ranking_stage,
    spanning_tree_stage,
    stage_label,
    steiner_tree_stage,
    to_jsonable,
)
from .money import Money
from .multistage import (
    CandidateStages,
    HmmdStages,
    KnapsackStages,
    MultipleChoiceStages,
    StageStep,
    Trajectory,
    aggregate,
    compose_trajectories,
    scheme1_series,
    scheme2_compose,
    scheme3_select,
)
from .oracle import (
    oracle_assignment,
    oracle_hmmd,
    oracle_knapsack,
    oracle_mst,
    oracle_multiple_choice,
    oracle_restructure,
    oracle_steiner,
)
from .restructure import (
    moves_toward,
    reassignment_op,
    restructure_assignment,
    restructure_clustering,
    restructure_hmmd,
    restructure_knapsack,
    restructure_multiple_choice,
    restructure_ranking,
    restructure_steiner,
    restructure_tree,
)
from .restructure.trees import DEFAULT_EDGE_COST
from .solvers import (
    Permutation,
    hmmd_synthesize,
    minimum_spanning_tree,
    solve_assignment,
    solve_knapsack,
    solve_multiple_choice,
    steiner_tree,
)

UNBOUNDED = Money(10**12)


# solve ----------------------------------------------------------------------


def cmd_solve(doc: InstanceDocument, stage: int, oracle: bool = False) -> dict:
    kind = doc.kind
    report: dict = {"command": "solve", "kind": kind, "stage": stage, "label": stage_label(doc, stage)}
    verdict = None
    if kind == "knapsack":
        inst = knapsack_stage(doc, stage).instance
        sol = solve_knapsack(inst)
        report.update(solution=sol, objective=sol.profit)
        if oracle:
            rep = oracle_knapsack(inst)
            verdict = (rep.objective == sol.profit and rep.optimum == sol.ids, rep)
    elif kind == "multiple-choice":
        inst = multiple_choice_stage(doc, stage).instance
        sol = solve_multiple_choice(inst)
        report.update(solution=sol, objective=sol.profit)
        if oracle:
            rep = oracle_multiple_choice(inst)
            verdict = (rep.objective == sol.profit, rep)
    elif kind == "assignment":
        st = assignment_stage(doc, stage)
        if st.instance is None:
            raise InputError(f"stages[{stage}].profit: missing (solve needs a square profit matrix)")
        perm = solve_assignment(st.instance)
        report.update(solution=perm, objective=st.instance.value(perm.s))
        if oracle:
            rep = oracle_assignment(st.instance)
            verdict = (rep.objective == st.instance.value(perm.s) and rep.optimum == perm, rep)
    elif kind == "spanning-tree":
        g = spanning_tree_stage(doc, stage).graph
        t = minimum_spanning_tree(g)
        report.update(solution=t, objective=t.weight)
        if oracle:
            rep = oracle_mst(g)
            verdict = (rep.objective == t.weight and rep.optimum == t, rep)
    elif kind == "steiner-tree":
        st = steiner_tree_stage(doc, stage)
        t = steiner_tree(st.graph, st.terminals)
        report.update(solution=t, objective=t.weight)
        if oracle:
            rep = oracle_steiner(st.graph, st.terminals)
            verdict = (rep.objective == t.weight and rep.optimum == t, rep)
    elif kind in ("clustering", "ranking"):
        # no stage-level optimiser: the stage solution is part of the data
        st = clustering_stage(doc, stage) if kind == "clustering" else ranking_stage(doc, stage)
        report.update(solution=st.partition, source="given")
    elif kind == "hmmd":
        system = hmmd_stage(doc, stage).system
        front = hmmd_synthesize(system)
        report["front"] = list(front)
        if oracle:
            rep = oracle_hmmd(system)
            verdict = (rep.optimum == frozenset(c.choice for c in front), rep)
    if oracle:
        report["oracle"] = _verdict(verdict)
    return report


def _verdict(v) -> dict:
    if v is None:
        return {"verdict": "not-available"}
    ok, rep = v
    return {
        "verdict": "match" if ok else "mismatch",
        "objective": rep.objective,
        "n_optima": rep.n_optima,
        "space_size": rep.space_size,
    }


# current solutions ----------------------------------------------------------


def current_solution(doc: InstanceDocument, i: int):
    """The stage's given solution, or its optimum when none is given."""
    kind = doc.kind
    if kind == "knapsack":
        st = knapsack_stage(doc, i)
        return st.solution if st.solution is not None else solve_knapsack(st.instance).ids
    if kind == "multiple-choice":
        st = multiple_choice_stage(doc, i)
        return st.solution if st.solution is not None else solve_multiple_choice(st.instance).chosen
    if kind == "assignment":
        st = assignment_stage(doc, i)
        if st.assignment is not None:
            return st.assignment
        if st.instance is None:
            raise InputError(f"stages[{i}]: needs an assignment or a profit matrix")
        return solve_assignment(st.instance)
    if kind == "spanning-tree":
        st = spanning_tree_stage(doc, i)
        return st.tree if st.tree is not None else minimum_spanning_tree(st.graph)
    if kind == "steiner-tree":
        st = steiner_tree_stage(doc, i)
        return st.tree if st.tree is not None else steiner_tree(st.graph, st.terminals)
    if kind == "clustering":
        return clustering_stage(doc, i).partition
    if kind == "ranking":
        return ranking_stage(doc, i).partition
    if kind == "hmmd":
        st = hmmd_stage(doc, i)
        if st.solution is not None:
            return st.solution
        return hmmd_synthesize(st.system)[0].choice
    raise InputError(f"unknown kind {kind!r}")


def start_label(doc: InstanceDocument) -> str:
    if doc.kind == "hmmd":
        lbl = hmmd_stage(doc, 0).solution_label
        if lbl:
            return str(lbl)
    return "S0"


# restructure ----------------------------------------------------------------


@dataclass
class Step:
    """One restructuring problem: run it, or ask the oracle about it."""

    run: Callable[[Any, int], Any]  # (budget, top) -> plan | list | tuple
    oracle_inputs: dict | None
    check: Callable[[Any, Any], bool] | None


def _budget_for(doc: InstanceDocument, to: int, given):
    """Budget from the flag, else from the goal stage; ``None`` means unlimited for HMMD."""
    if doc.kind == "hmmd":
        st = hmmd_stage(doc, to)
        raw = given if given is not None else st.budget
        if raw is None:
            return None
        if st.da_costs is None:
            try:
                n = int(str(raw))
            except ValueError:
                raise InputError(f"--budget: HMMD budgets without DA costs count changed components, got {raw!r}") from None
            if n < 0:
                raise InputError("--budget: must be non-negative")
            return n
        return Money.of(raw)
    if given is not None:
        return Money.of(given)
    budget = getattr(STAGE_OF[doc.kind](doc, to), "budget", None)
    if budget is None:
        raise InputError(f"stages[{to}].budget: missing (pass --budget)")
    return budget


def restructure_step(doc: InstanceDocument, prev, to: int, objective: str | None = None) -> Step:
    """Restructuring of ``prev`` into stage ``to`` of ``doc``."""
    kind, opts = doc.kind, doc.options
    if kind == "knapsack":
        st = knapsack_stage(doc, to)
        fixed = frozenset(opts.get("fixed", ()))
        obj = objective or opts.get("objective", "max-profit")
        inputs = {"s0": frozenset(prev), "goal": st.instance, "costs": st.costs, "fixed": fixed}
        return Step(
            lambda b, q: restructure_knapsack(frozenset(prev), st.instance, st.costs, b, obj, fixed, top=q),
            inputs,
            lambda p, r: p.objective == r.objective and p.solution.ids == r.optimum,
        )
    if kind == "multiple-choice":
        st = multiple_choice_stage(doc, to)
        target = st.solution if opts.get("target") == "goal-solution" else None
        inputs = {"m0": tuple(prev), "goal": st.instance, "costs": st.costs, "target": target}
        return Step(
            lambda b, q: restructure_multiple_choice(tuple(prev), st.instance, st.costs, b, target, top=q),
            inputs,
            lambda p, r: p.objective == r.objective and p.solution.chosen == r.optimum,
        )
    if kind == "assignment":
        st = assignment_stage(doc, to)
        cur = {i + 1: p for i, p in enumerate(prev.s)} if isinstance(prev, Permutation) else dict(prev)
        if st.ops:
            ops = [
                reassignment_op(e, cur[e], dst, st.costs, st.profit, label)
                for label, e, dst in st.ops
                if e in cur and cur[e] != dst
            ]
            inputs = {"s1": prev, "ops": ops, "capacity": st.capacity}
            return Step(
                lambda b, q: restructure_assignment(prev, ops, b, capacity=st.capacity, top=q),
                inputs,
                lambda p, r: p.objective == r.objective and frozenset(op.describe() for op in p.ops) == r.optimum,
            )
        if st.instance is None or not isinstance(prev, Permutation):
            raise InputError(f"stages[{to}]: needs ops, or a profit matrix and a permutation to start from")
        costs = {(i + 1, p): st.costs.get((i + 1, p), (Money(0), Money(0))) for i in range(st.instance.n) for p in range(1, st.instance.n + 1)}
        inputs = {"s1": prev, "ops": None, "goal": st.instance, "costs": costs}
        return Step(
            lambda b, q: restructure_assignment(prev, None, b, goal=st.instance, costs=costs, top=q),
            inputs,
            lambda p, r: p.solution == r.optimum,
        )
    if kind == "spanning-tree":
        st = spanning_tree_stage(doc, to)
        prox = opts.get("proximity", "edge-symmetric-difference")
        default = st.default_cost if st.default_cost is not None else DEFAULT_EDGE_COST
        inputs = {"t1": prev, "goal": st.graph, "costs": st.costs, "proximity": prox, "default_cost": default}
        return Step(
            lambda b, q: restructure_tree(prev, st.graph, st.costs, b, prox, default_cost=default, top=q),
            inputs,
            lambda p, r: p.proximity == r.objective and p.solution.edges == r.optimum,
        )
    if kind == "steiner-tree":
        st = steiner_tree_stage(doc, to)
        prox = opts.get("proximity", "weight-delta")
        default = st.default_cost if st.default_cost is not None else DEFAULT_EDGE_COST
        inputs = {
            "s1": prev,
            "goal": st.graph,
            "costs": st.costs,
            "steiner_costs": st.steiner_costs,
            "proximity": prox,
            "terminals": st.terminals,
            "default_cost": default,
        }
        return Step(
            lambda b, q: restructure_steiner(
                prev, st.graph, st.costs, st.steiner_costs, b, prox, terminals=st.terminals, default_cost=default, top=q
            ),
            inputs,
            lambda p, r: p.proximity == r.objective and (p.solution.steiner, p.solution.edges) == r.optimum,
        )
    if kind == "clustering":
        st = clustering_stage(doc, to)
        model = opts.get("model", "knapsack")
        ops = moves_toward(prev, st.partition, st.move_costs, st.default_cost)
        inputs = {"x1": prev, "ops": ops, "model": model}
        return Step(
            lambda b, q: restructure_clustering(prev, ops, b, model, goal=st.partition, top=q),
            inputs,
            lambda p, r: p.objective == r.objective and frozenset(op.subject for op in p.ops) == r.optimum,
        )
    if kind == "ranking":
        st = ranking_stage(doc, to)
        inputs = {"r1": prev, "r2": st.partition, "move_costs": st.move_costs, "default_cost": st.default_cost}
        return Step(
            lambda b, q: restructure_ranking(prev, st.partition, st.move_costs, b, st.default_cost, top=q),
            inputs,
            lambda p, r: p.proximity == r.objective and p.solution == r.optimum,
        )
    if kind == "hmmd":
        st = hmmd_stage(doc, to)
        inputs = {"t0": tuple(prev), "goal": st.system, "costs": st.da_costs}
        return Step(
            lambda b, q: restructure_hmmd(tuple(prev), st.system, b, st.da_costs),
            inputs,
            lambda plans, r: frozenset(p.solution.choice for p in plans) == r.optimum,
        )
    raise InputError(f"unknown kind {kind!r}")


STAGE_OF = {
    "knapsack": knapsack_stage,
    "multiple-choice": multiple_choice_stage,
    "assignment": assignment_stage,
    "spanning-tree": spanning_tree_stage,
    "steiner-tree": steiner_tree_stage,
    "clustering": clustering_stage,
    "ranking": ranking_stage,
    "hmmd": hmmd_stage,
}


def _min_budget_hint(doc: InstanceDocument, step: Step):
    """Cheapest change cost that reaches a goal-feasible solution, when the oracle can tell."""
    if step.oracle_inputs is None:
        return None
    try:
        unbounded = None if doc.kind == "hmmd" else UNBOUNDED
        return oracle_restructure(doc.kind, step.oracle_inputs, unbounded).min_feasible_cost
    except RestructError:
        return None


def cmd_restructure(
    doc: InstanceDocument, frm: int, to: int, budget=None, objective: str | None = None, oracle: bool = False
) -> dict:
    doc.stage(frm), doc.stage(to)
    prev = current_solution(doc, frm)
    b = _budget_for(doc, to, budget)
    step = restructure_step(doc, prev, to, objective)
    try:
        result = step.run(b, 1)
    except InfeasibleWithBudgetError as exc:
        hint = _min_budget_hint(doc, step)
        if hint is not None:
            # ranking budgets are strict bounds, so the hint is exclusive there
            bound = "any budget above" if doc.kind == "ranking" else "minimum feasible budget is"
            raise InfeasibleWithBudgetError(f"{exc}; {bound} {hint}", hint) from exc
        raise
    report: dict = {
        "command": "restructure",
        "kind": doc.kind,
        "from": frm,
        "to": to,
        "budget": b if b is not None else "unlimited",
        "start": prev,
    }
    if doc.kind == "hmmd":
        report["front"] = [plan_json(p) for p in result]
    else:
        report["plan"] = plan_json(result)
    if oracle:
        try:
            rep = oracle_restructure(doc.kind, step.oracle_inputs, b)
            report["oracle"] = _verdict((step.check(result, rep), rep))
        except TooLargeError as exc:
            report["oracle"] = {"verdict": "not-available", "reason": str(exc)}
    return report


# trajectory -----------------------------------------------------------------


class DocumentStages:
    """Stage model over any document kind, built from :func:`restructure_step`."""

    def __init__(self, doc: InstanceDocument, targets: Sequence[int]):
        self.doc = doc
        self.targets = list(targets)

    @property
    def n_stages(self) -> int:
        return len(self.targets)

    def steps(self, prev, stage, budget, q):
        to = self.targets[stage]
        found = restructure_step(self.doc, prev, to).run(budget, q)
        plans = list(found) if isinstance(found, (list, tuple)) else [found]
        out = []
        for r, p in enumerate(plans[:q]):
            label = f"S*{to}" if r == 0 else f"S*{to}_{r + 1}"
            if p.proximity is None:
                prox = ()  # explicit-op reassignment has no goal optimum to measure against
            else:
                prox = p.proximity if isinstance(p.proximity, tuple) else (p.proximity,)
            out.append(StageStep(_state(p.solution), p.cost, prox, label, p))
        return out


def _state(sol):
    # the value handed to the next stage
    for attr in ("ids", "chosen", "choice"):
        if hasattr(sol, attr):
            return getattr(sol, attr)
    return sol


def _stage_model(doc: InstanceDocument, targets: list[int]):
    if doc.kind == "knapsack":
        sts = [knapsack_stage(doc, t) for t in targets]
        return KnapsackStages(
            [s.instance for s in sts],
            [s.costs for s in sts],
            frozenset(doc.options.get("fixed", ())),
            doc.options.get("objective", "max-profit"),
        )
    if doc.kind == "multiple-choice":
        sts = [multiple_choice_stage(doc, t) for t in targets]
        targets_sel = [s.solution for s in sts] if doc.options.get("target") == "goal-solution" else None
        return MultipleChoiceStages([s.instance for s in sts], [s.costs for s in sts], targets_sel)
    if doc.kind == "hmmd":
        sts = [hmmd_stage(doc, t) for t in targets]
        if any(s.candidates for s in sts):
            parents = {}
            for s in sts:
                parents.update(s.parents or {})
            return CandidateStages(
                [s.system for s in sts], [s.candidates for s in sts], parents or None, start_label(doc)
            )
        return HmmdStages([s.system for s in sts], [s.da_costs for s in sts] if any(s.da_costs for s in sts) else None)
    return DocumentStages(doc, targets)


def _parse_list(text: str | None, what: str) -> list[str] | None:
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if not all(parts):
        raise InputError(f"--{what}: empty entry in {text!r}")
    return parts


def cmd_trajectory(
    doc: InstanceDocument, scheme: int = 1, budgets=None, candidates=None, weights=None, objective: str | None = None
) -> dict:
    if scheme not in (1, 2, 3):
        raise InputError(f"--scheme: expected 1, 2 or 3, got {scheme!r}")
    if objective is not None:
        doc = InstanceDocument(doc.kind, doc.stages, {**doc.options, "objective": objective}, doc.name)
    n = len(doc.stages)
    # one stage: restructure its given solution toward its own optimum
    targets = list(range(1, n)) if n > 1 else [0]
    s0 = current_solution(doc, 0)
    model = _stage_model(doc, targets)
    if budgets is not None and len(budgets) != len(targets):
        raise InputError(f"--budgets: expected {len(targets)} values, got {len(budgets)}")
    bs = [_budget_for(doc, t, None if budgets is None else budgets[k]) for k, t in enumerate(targets)]
    qs = [int(q) for q in candidates] if candidates is not None else None
    label = start_label(doc)
    report: dict = {"command": "trajectory", "kind": doc.kind, "scheme": scheme, "budgets": bs, "start": s0}
    if scheme == 1:
        trajs = [scheme1_series(s0, model, bs, label)]
    elif scheme == 2:
        trajs = [scheme2_compose(s0, model, bs, qs, weights, label)]
    else:
        pool = compose_trajectories(s0, model, bs, qs, label)
        report["considered"] = [_traj_json(t) for t in pool]
        trajs = scheme3_select(pool)
    report["trajectories"] = [_traj_json(t) for t in trajs]
    return report


def _traj_json(t: Trajectory) -> dict:
    h, rho = aggregate(t)
    return {
        "labels": list(t.labels),
        "H_total": h,
        "rho_total": list(rho),
        "steps": [
            {
                "label": s.label,
                "solution": s.plan.solution if s.plan is not None else s.solution,
                "H": s.cost,
                "rho": list(s.proximity),
                "ops": [op.describe() for op in s.plan.ops] if s.plan is not None else [],
                "diff": s.plan.diff if s.plan is not None else None,
            }
            for s in t.steps
        ],
    }


# text output ----------------------------------------------------------------


def render_text(report: dict) -> str:
    data = to_jsonable(report)
    lines: list[str] = []
    _walk(data, 0, lines)
    return "\n".join(lines) + "\n"


def _inline(x) -> str:
    if isinstance(x, list):
        return "[" + ", ".join(_inline(v) for v in x) + "]"
    if isinstance(x, dict):
        if set(x) == {"deleted", "added"}:
            return f"-{_inline(x['deleted'])} +{_inline(x['added'])}"
        return "{" + ", ".join(f"{k}: {_inline(v)}" for k, v in sorted(x.items())) + "}"
    return "-" if x is None else str(x)


def _walk(x, depth: int, lines: list[str]):
    pad = "  " * depth
    for key in sorted(x):
        v = x[key]
        if isinstance(v, dict) and set(v) != {"deleted", "added"} and any(isinstance(u, (dict, list)) for u in v.values()):
            lines.append(f"{pad}{key}:")
            _walk(v, depth + 1, lines)
        elif isinstance(v, list) and v and all(isinstance(u, dict) for u in v):
            lines.append(f"{pad}{key}:")
            for k, item in enumerate(v, 1):
                lines.append(f"{pad}  [{k}]")
                _walk(item, depth + 2, lines)
        else:
            lines.append(f"{pad}{key}: {_inline(v)}")


# entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="restruct", description="Solve and restructure staged combinatorial instances.")
    p.add_argument("--version", action="version", version=f"restruct {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="instance document (JSON)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--objective", choices=("max-profit", "min-proximity"))

    sp = sub.add_parser("solve", help="optimum of one stage")
    common(sp)
    sp.add_argument("--stage", type=int, default=0)
    sp.add_argument("--oracle", action="store_true", help="cross-check against brute force")

    sp = sub.add_parser("restructure", help="restructure one stage's solution into another stage")
    common(sp)
    sp.add_argument("--from", dest="frm", type=int, default=0)
    sp.add_argument("--to", type=int, default=None)
    sp.add_argument("--budget")
    sp.add_argument("--oracle", action="store_true", help="cross-check against brute force")

    sp = sub.add_parser("trajectory", help="multistage restructuring trajectory")
    common(sp)
    sp.add_argument("--scheme", type=int, choices=(1, 2, 3), default=1)
    sp.add_argument("--budgets")
    sp.add_argument("--candidates")
    sp.add_argument("--weights")
    return p


def run(args: argparse.Namespace) -> dict:
    doc = load_document(args.file)
    if args.command == "solve":
        if args.objective is not None:
            raise InputError("--objective applies to restructure and trajectory")
        return cmd_solve(doc, args.stage, args.oracle)
    if args.command == "restructure":
        to = args.to if args.to is not None else min(args.frm + 1, len(doc.stages) - 1)
        return cmd_restructure(doc, args.frm, to, args.budget, args.objective, args.oracle)
    weights = None
    if args.weights is not None:
        try:
            weights = [int(w) for w in _parse_list(args.weights, "weights")]
        except ValueError:
            raise InputError(f"--weights: expected integers, got {args.weights!r}") from None
    cands = _parse_list(args.candidates, "candidates")
    if cands is not None and not all(c.isdigit() for c in cands):
        raise InputError(f"--candidates: expected positive integers, got {args.candidates!r}")
    return cmd_trajectory(doc, args.scheme, _parse_list(args.budgets, "budgets"), cands, weights, args.objective)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except TooLargeError as exc:
        print(f"restruct: too large: {exc}", file=sys.stderr)
        return exc.exit_code
    except InputError as exc:
        print(f"restruct: input error: {exc}", file=sys.stderr)
        return exc.exit_code
    except InfeasibleError as exc:
        print(f"restruct: infeasible: {exc}", file=sys.stderr)
        return exc.exit_code
    except RestructError as exc:
        print(f"restruct: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(dumps(report) if args.format == "json" else render_text(report))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
