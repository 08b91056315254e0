"""Instance documents and report serialization.

An instance file is one JSON object::

    {"kind": "knapsack", "name": "...", "options": {...}, "stages": [{...}, ...]}

Money values are decimal strings such as ``"13.8"``. Each stage carries the
problem data for one time point, the change costs of moving *into* that
stage and, optionally, a default budget and an explicit current solution.
The builders below turn raw stages into solver and restructuring inputs and
raise :class:`InputError` naming the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import InputError, InvalidInstanceError
from .ids import sorted_ids
from .money import Money
from .restructure.model import ChangeOp, RestructurePlan, SolutionDiff
from .restructure.partitions import LayeredRanking, Partition
from .scales import QualityVector
from .solvers.assignment import AssignmentInstance, Permutation
from .solvers.hmmd import CompositeSolution, MorphSystem
from .solvers.knapsack import GroupSelection, Item, KnapsackInstance, MultipleChoiceInstance, SubsetSolution
from .solvers.trees import TreeSolution, WeightedGraph, edge

KINDS = (
    "knapsack",
    "multiple-choice",
    "assignment",
    "spanning-tree",
    "steiner-tree",
    "clustering",
    "ranking",
    "hmmd",
)


@dataclass(frozen=True)
class InstanceDocument:
    kind: str
    stages: tuple
    options: Mapping = field(default_factory=dict)
    name: str = ""

    def stage(self, i: int) -> Mapping:
        if not 0 <= i < len(self.stages):
            raise InputError(f"stage {i} out of range (document has {len(self.stages)})")
        return self.stages[i]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "stages": list(self.stages)}
        if self.options:
            out["options"] = dict(self.options)
        if self.name:
            out["name"] = self.name
        return out


def parse_document(data: Any) -> InstanceDocument:
    if not isinstance(data, dict):
        raise InputError("document: expected a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise InputError(f"kind: expected one of {', '.join(KINDS)}, got {kind!r}")
    stages = data.get("stages")
    if not isinstance(stages, list) or not stages:
        raise InputError("stages: expected a non-empty array")
    for i, st in enumerate(stages):
        if not isinstance(st, dict):
            raise InputError(f"stages[{i}]: expected an object")
    options = data.get("options", {})
    if not isinstance(options, dict):
        raise InputError("options: expected an object")
    doc = InstanceDocument(kind, tuple(stages), options, str(data.get("name", "")))
    for i in range(len(stages)):
        # build every stage once so bad ids and values surface at load time
        STAGE_BUILDERS[kind](doc, i)
    return doc


def load_document(path) -> InstanceDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(data)


# field helpers ---------------------------------------------------------------


def _req(obj: Mapping, key: str, where: str):
    if key not in obj:
        raise InputError(f"{where}.{key}: missing")
    return obj[key]


def _money(value, where: str) -> Money:
    if isinstance(value, float):
        raise InputError(f"{where}: write money as a decimal string, got {value!r}")
    try:
        return Money.of(value)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def _pair(value, where: str) -> tuple[Money, Money]:
    if not isinstance(value, list) or len(value) != 2:
        raise InputError(f"{where}: expected [h-, h+]")
    return _money(value[0], f"{where}[0]"), _money(value[1], f"{where}[1]")


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected an array")
    return value


def _id(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: ids are integers or strings, got {value!r}")
    return value


def _key(s: str, ids: Mapping[str, Any], where: str):
    """Resolve a JSON object key back to an id (object keys are always strings)."""
    if s not in ids:
        raise InputError(f"{where}: unknown id {s!r}")
    return ids[s]


def stage_label(doc: InstanceDocument, i: int) -> str:
    return str(doc.stage(i).get("label", f"stage {i}"))


# per-kind builders -----------------------------------------------------------


@dataclass(frozen=True)
class KnapsackStage:
    instance: KnapsackInstance
    costs: dict
    solution: frozenset | None
    budget: Money | None


def knapsack_stage(doc: InstanceDocument, i: int) -> KnapsackStage:
    st, w = doc.stage(i), f"stages[{i}]"
    items, costs = [], {}
    seen = set()
    for j, raw in enumerate(_list(_req(st, "items", w), f"{w}.items")):
        wj = f"{w}.items[{j}]"
        iid = _id(_req(raw, "id", wj), f"{wj}.id")
        if iid in seen:
            raise InvalidInstanceError(f"{wj}.id: duplicate id {iid!r}")
        seen.add(iid)
        items.append(Item(iid, _money(_req(raw, "profit", wj), f"{wj}.profit"), _money(_req(raw, "weight", wj), f"{wj}.weight")))
        if "cost" in raw:
            costs[iid] = _pair(raw["cost"], f"{wj}.cost")
    inst = KnapsackInstance(tuple(items), _money(_req(st, "capacity", w), f"{w}.capacity"))
    sol = None
    if "solution" in st:
        sol = frozenset(_id(x, f"{w}.solution") for x in _list(st["solution"], f"{w}.solution"))
        if not sol <= seen:
            raise InputError(f"{w}.solution: unknown ids {sorted_ids(sol - seen)}")
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return KnapsackStage(inst, costs, sol, budget)


@dataclass(frozen=True)
class MultipleChoiceStage:
    instance: MultipleChoiceInstance
    costs: dict
    solution: tuple | None
    budget: Money | None


def multiple_choice_stage(doc: InstanceDocument, i: int) -> MultipleChoiceStage:
    st, w = doc.stage(i), f"stages[{i}]"
    groups, names, costs, seen = [], [], {}, set()
    for g, raw in enumerate(_list(_req(st, "groups", w), f"{w}.groups")):
        wg = f"{w}.groups[{g}]"
        names.append(str(raw.get("name", f"G{g + 1}")))
        items = []
        for j, it in enumerate(_list(_req(raw, "items", wg), f"{wg}.items")):
            wj = f"{wg}.items[{j}]"
            iid = _id(_req(it, "id", wj), f"{wj}.id")
            if iid in seen:
                raise InvalidInstanceError(f"{wj}.id: duplicate id {iid!r}")
            seen.add(iid)
            items.append(Item(iid, _money(_req(it, "profit", wj), f"{wj}.profit"), _money(_req(it, "weight", wj), f"{wj}.weight")))
            if "cost" in it:
                costs[iid] = _pair(it["cost"], f"{wj}.cost")
        groups.append(tuple(items))
    inst = MultipleChoiceInstance(tuple(groups), _money(_req(st, "capacity", w), f"{w}.capacity"), tuple(names))
    sol = None
    if "solution" in st:
        sol = tuple(_list(st["solution"], f"{w}.solution"))
        if len(sol) != len(groups):
            raise InputError(f"{w}.solution: expected one entry per group")
        for g, x in enumerate(sol):
            if x is not None and x not in {it.id for it in groups[g]}:
                raise InputError(f"{w}.solution[{g}]: {x!r} is not in group {names[g]}")
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return MultipleChoiceStage(inst, costs, sol, budget)


@dataclass(frozen=True)
class AssignmentStage:
    instance: AssignmentInstance | None
    elements: tuple
    positions: tuple
    costs: dict  # (element, position) -> (h-, h+)
    profit: dict  # (element, position) -> c
    assignment: dict | None
    capacity: dict | None
    ops: tuple  # (label, element, to)
    budget: Money | None


def assignment_stage(doc: InstanceDocument, i: int) -> AssignmentStage:
    st, w = doc.stage(i), f"stages[{i}]"
    inst = None
    if "profit" in st:
        rows = _list(st["profit"], f"{w}.profit")
        n = len(rows)
        matrix = []
        for r, row in enumerate(rows):
            row = _list(row, f"{w}.profit[{r}]")
            if len(row) != n:
                raise InvalidInstanceError(f"{w}.profit: matrix must be square")
            matrix.append(tuple(_money(v, f"{w}.profit[{r}][{c}]") for c, v in enumerate(row)))
        inst = AssignmentInstance(tuple(matrix))
    elements = tuple(_id(e, f"{w}.elements") for e in _list(st.get("elements", []), f"{w}.elements"))
    positions = tuple(_id(p, f"{w}.positions") for p in _list(st.get("positions", []), f"{w}.positions"))
    e_ids = {str(e): e for e in elements}
    costs, profit = {}, {}
    for ek, row in (st.get("table") or {}).items():
        e = _key(ek, e_ids, f"{w}.table")
        row = _list(row, f"{w}.table.{ek}")
        if len(row) != len(positions):
            raise InvalidInstanceError(f"{w}.table.{ek}: expected {len(positions)} triples")
        for p, triple in zip(positions, row):
            wt = f"{w}.table.{ek}[{p}]"
            if not isinstance(triple, list) or len(triple) != 3:
                raise InputError(f"{wt}: expected [h-, h+, c]")
            costs[(e, p)] = (_money(triple[0], wt), _money(triple[1], wt))
            profit[(e, p)] = _money(triple[2], wt)
    p_ids = {str(p): p for p in positions}
    assignment = None
    if "assignment" in st:
        assignment = {}
        for ek, p in st["assignment"].items():
            e = _key(ek, e_ids, f"{w}.assignment")
            if p not in positions:
                raise InputError(f"{w}.assignment.{ek}: unknown position {p!r}")
            assignment[e] = p
    capacity = None
    if "capacity" in st:
        capacity = {_key(pk, p_ids, f"{w}.capacity"): int(v) for pk, v in st["capacity"].items()}
    ops = []
    for j, raw in enumerate(_list(st.get("ops", []), f"{w}.ops")):
        wj = f"{w}.ops[{j}]"
        e = _req(raw, "element", wj)
        if e not in elements:
            raise InputError(f"{wj}.element: unknown element {e!r}")
        to = _req(raw, "to", wj)
        if to not in positions:
            raise InputError(f"{wj}.to: unknown position {to!r}")
        ops.append((str(raw.get("label", f"op{j + 1}")), e, to))
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return AssignmentStage(inst, elements, positions, costs, profit, assignment, capacity, tuple(ops), budget)


@dataclass(frozen=True)
class TreeStage:
    graph: WeightedGraph
    terminals: frozenset
    costs: dict
    steiner_costs: dict
    default_cost: Money | None
    tree: TreeSolution | None
    budget: Money | None


def _tree_stage(doc: InstanceDocument, i: int, steiner: bool) -> TreeStage:
    st, w = doc.stage(i), f"stages[{i}]"
    key = "terminals" if steiner else "vertices"
    terms = [_id(v, f"{w}.{key}") for v in _list(_req(st, key, w), f"{w}.{key}")]
    zs = [_id(v, f"{w}.steiner") for v in _list(st.get("steiner", []), f"{w}.steiner")] if steiner else []
    verts = set(terms) | set(zs)
    triples = []
    for j, raw in enumerate(_list(_req(st, "edges", w), f"{w}.edges")):
        if not isinstance(raw, list) or len(raw) != 3:
            raise InputError(f"{w}.edges[{j}]: expected [u, v, weight]")
        u, v = raw[0], raw[1]
        if u not in verts or v not in verts:
            raise InputError(f"{w}.edges[{j}]: unknown vertex")
        triples.append((u, v, _money(raw[2], f"{w}.edges[{j}][2]")))
    g = WeightedGraph.build(terms, triples, zs)
    costs = {}
    for j, raw in enumerate(_list(st.get("costs", []), f"{w}.costs")):
        if not isinstance(raw, list) or len(raw) != 4:
            raise InputError(f"{w}.costs[{j}]: expected [u, v, h-, h+]")
        costs[(raw[0], raw[1])] = _pair(raw[2:], f"{w}.costs[{j}]")
    zc = {}
    for zk, pair in (st.get("steiner_costs") or {}).items():
        z = _key(zk, {str(z): z for z in zs}, f"{w}.steiner_costs")
        zc[z] = _pair(pair, f"{w}.steiner_costs.{zk}")
    default = _money(st["default_cost"], f"{w}.default_cost") if "default_cost" in st else None
    tree = None
    if "tree" in st:
        raw = st["tree"]
        if isinstance(raw, dict):
            es, tz = raw.get("edges", []), raw.get("steiner", [])
        else:
            es, tz = raw, []
        pairs = []
        for j, e in enumerate(_list(es, f"{w}.tree")):
            if not isinstance(e, list) or len(e) != 2:
                raise InputError(f"{w}.tree[{j}]: expected [u, v]")
            pairs.append(tuple(e))
        unknown = {v for e in pairs for v in e} - verts
        if unknown:
            raise InputError(f"{w}.tree: unknown vertices {sorted_ids(unknown)}")
        tree = TreeSolution.of(g, pairs, tz) if all(_has_edge(g, e) for e in pairs) else _free_tree(g, pairs, tz)
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return TreeStage(g, frozenset(terms), costs, zc, default, tree, budget)


def _has_edge(g: WeightedGraph, e) -> bool:
    return edge(*e) in g.weights


def _free_tree(g: WeightedGraph, pairs, tz) -> TreeSolution:
    # the current tree may use edges the stage graph no longer has
    es = frozenset(edge(*e) for e in pairs)
    return TreeSolution(es, frozenset(tz), sum((g.weights[e] for e in es if e in g.weights), Money(0)))


def spanning_tree_stage(doc, i):
    return _tree_stage(doc, i, steiner=False)


def steiner_tree_stage(doc, i):
    return _tree_stage(doc, i, steiner=True)


@dataclass(frozen=True)
class PartitionStage:
    partition: Partition
    move_costs: dict
    default_cost: Money
    budget: Money | None


def _partition(raw, where: str, cls):
    groups = []
    for j, c in enumerate(_list(raw, where)):
        groups.append(frozenset(_id(x, f"{where}[{j}]") for x in _list(c, f"{where}[{j}]")))
    try:
        return cls(tuple(groups))
    except InvalidInstanceError as exc:
        raise InvalidInstanceError(f"{where}: {exc}") from None


def clustering_stage(doc: InstanceDocument, i: int) -> PartitionStage:
    st, w = doc.stage(i), f"stages[{i}]"
    x = _partition(_req(st, "clusters", w), f"{w}.clusters", Partition)
    ids = {str(e): e for e in x.universe}
    costs = {_key(k, ids, f"{w}.move_costs"): _money(v, f"{w}.move_costs.{k}") for k, v in (st.get("move_costs") or {}).items()}
    default = _money(st.get("default_cost", 1), f"{w}.default_cost")
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return PartitionStage(x, costs, default, budget)


def ranking_stage(doc: InstanceDocument, i: int) -> PartitionStage:
    st, w = doc.stage(i), f"stages[{i}]"
    r = _partition(_req(st, "layers", w), f"{w}.layers", LayeredRanking)
    costs = {}
    for j, raw in enumerate(_list(st.get("move_costs", []), f"{w}.move_costs")):
        if not isinstance(raw, list) or len(raw) != 3:
            raise InputError(f"{w}.move_costs[{j}]: expected [element, layer, cost]")
        if raw[0] not in r.universe:
            raise InputError(f"{w}.move_costs[{j}]: unknown element {raw[0]!r}")
        costs[(raw[0], raw[1])] = _money(raw[2], f"{w}.move_costs[{j}][2]")
    default = _money(st.get("default_cost", 1), f"{w}.default_cost")
    budget = _money(st["budget"], f"{w}.budget") if "budget" in st else None
    return PartitionStage(r, costs, default, budget)


@dataclass(frozen=True)
class HmmdStage:
    system: MorphSystem
    solution: tuple | None
    solution_label: str | None
    candidates: dict  # label -> choice
    parents: dict | None
    da_costs: dict | None
    budget: Any


def hmmd_stage(doc: InstanceDocument, i: int) -> HmmdStage:
    st, w = doc.stage(i), f"stages[{i}]"
    comps = {}
    for j, raw in enumerate(_list(_req(st, "components", w), f"{w}.components")):
        wj = f"{w}.components[{j}]"
        name = str(_req(raw, "name", wj))
        das = []
        for a, da in enumerate(_list(_req(raw, "alternatives", wj), f"{wj}.alternatives")):
            if not isinstance(da, list) or len(da) != 2 or not isinstance(da[1], int):
                raise InputError(f"{wj}.alternatives[{a}]: expected [id, priority]")
            das.append((str(da[0]), da[1]))
        comps[name] = das
    known = {d for das in comps.values() for d, _ in das}
    compat = {}
    for j, raw in enumerate(_list(st.get("compat", []), f"{w}.compat")):
        if not isinstance(raw, list) or len(raw) != 3 or not isinstance(raw[2], int):
            raise InputError(f"{w}.compat[{j}]: expected [a, b, weight]")
        if raw[0] not in known or raw[1] not in known:
            raise InputError(f"{w}.compat[{j}]: unknown DA")
        compat[(raw[0], raw[1])] = raw[2]
    k = int(doc.options.get("k", 3))
    l = int(doc.options.get("l", 3))
    try:
        system = MorphSystem.build(comps, compat, k, l)
    except (InputError, ValueError) as exc:
        raise InvalidInstanceError(f"{w}: {exc}") from None

    def choice(raw, where):
        ch = tuple(_list(raw, where))
        if len(ch) != system.m or any(c not in known for c in ch):
            raise InputError(f"{where}: expected one known DA per component")
        return ch

    sol, sol_label = None, None
    if "solution" in st:
        raw = st["solution"]
        if isinstance(raw, dict):
            sol = choice(_req(raw, "choice", f"{w}.solution"), f"{w}.solution.choice")
            sol_label = raw.get("label")
        else:
            sol = choice(raw, f"{w}.solution")
    cands = {str(lbl): choice(ch, f"{w}.candidates.{lbl}") for lbl, ch in (st.get("candidates") or {}).items()}
    parents = None
    if "parents" in st:
        parents = {str(lbl): [str(p) for p in _list(ps, f"{w}.parents.{lbl}")] for lbl, ps in st["parents"].items()}
    da_costs = None
    if "da_costs" in st:
        da_costs = {}
        for dk, pair in st["da_costs"].items():
            if dk not in known:
                raise InputError(f"{w}.da_costs: unknown DA {dk!r}")
            da_costs[dk] = _pair(pair, f"{w}.da_costs.{dk}")
    budget = None
    if "budget" in st:
        b = st["budget"]
        budget = b if isinstance(b, int) and not isinstance(b, bool) else _money(b, f"{w}.budget")
    return HmmdStage(system, sol, sol_label, cands, parents, da_costs, budget)


STAGE_BUILDERS = {
    "knapsack": knapsack_stage,
    "multiple-choice": multiple_choice_stage,
    "assignment": assignment_stage,
    "spanning-tree": spanning_tree_stage,
    "steiner-tree": steiner_tree_stage,
    "clustering": clustering_stage,
    "ranking": ranking_stage,
    "hmmd": hmmd_stage,
}


# serialization ---------------------------------------------------------------


def to_jsonable(x: Any) -> Any:
    """Plain JSON values with a fixed order for every set-like container."""
    if isinstance(x, Money):
        return str(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (set, frozenset)):
        return [to_jsonable(e) for e in sorted_ids(x)]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(e) for e in x]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, SolutionDiff):
        return {"deleted": to_jsonable(x.deleted), "added": to_jsonable(x.added)}
    if isinstance(x, QualityVector):
        return format_quality(x)
    if isinstance(x, CompositeSolution):
        return {"composite": x.label(), "choice": list(x.choice), "N": format_quality(x.quality)}
    if isinstance(x, SubsetSolution):
        return {"ids": to_jsonable(x.ids), "profit": str(x.profit), "weight": str(x.weight)}
    if isinstance(x, GroupSelection):
        return {"chosen": to_jsonable(x.chosen), "profit": str(x.profit), "weight": str(x.weight)}
    if isinstance(x, TreeSolution):
        out = {"edges": to_jsonable(x.edges), "weight": str(x.weight)}
        if x.steiner:
            out["steiner"] = to_jsonable(x.steiner)
        return out
    if isinstance(x, Partition):
        return x.listing()
    if isinstance(x, Permutation):
        return list(x.s)
    if isinstance(x, ChangeOp):
        return op_json(x)
    if isinstance(x, RestructurePlan):
        return plan_json(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def format_quality(q: QualityVector) -> str:
    return f"({q.w.w};{','.join(str(c) for c in q.n.counts)})"


def op_json(op: ChangeOp) -> dict:
    return {
        "op": op.describe(),
        "kind": op.kind.value,
        "subject": to_jsonable(op.subject),
        "cost": to_jsonable(op.cost),
        "profit": to_jsonable(op.profit),
    }


def plan_json(p: RestructurePlan) -> dict:
    out = {
        "ops": [op_json(op) for op in p.ops],
        "solution": to_jsonable(p.solution),
        "H": to_jsonable(p.cost),
        "rho": to_jsonable(p.proximity),
        "budget_unit": p.budget_unit,
    }
    if p.objective is not None:
        out["objective"] = to_jsonable(p.objective)
    if p.diff is not None:
        out["diff"] = to_jsonable(p.diff)
    if p.steiner_diff is not None:
        out["steiner_diff"] = to_jsonable(p.steiner_diff)
    return out


def dumps(report: Mapping) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
