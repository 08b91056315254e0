"""Brute-force reference answers for small instances.

Every routine enumerates its whole search space: subsets, selections,
permutations, edge sets or composites. None of them reuse the search code of
the solvers or the restructuring engine. They do share the tie-break keys, so
canonical optima can be compared directly and not only their values.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import InputError, TooLargeError
from .ids import id_key, ids_key, sorted_ids
from .money import ZERO, Money
from .restructure.hmmd import change_ops, goal_reference, hmmd_proximity
from .restructure.model import ChangeOp, OpKind, plan_key
from .restructure.partitions import LayeredRanking, Partition, layer_distance, move_op
from .scales import Dominance, QualityVector, dominates_min, dominates_quality
from .solvers.assignment import AssignmentInstance, Permutation
from .solvers.hmmd import MorphSystem, evaluate_composite
from .solvers.knapsack import KnapsackInstance, MultipleChoiceInstance
from .solvers.trees import TreeSolution, WeightedGraph, edge, edge_key, is_spanning_tree, sorted_edges, tree_key

MAX_KNAPSACK_ITEMS = 24
MAX_UNIVERSE = 20
MAX_CANDIDATES = 10**5
MAX_SPACE = 2 * 10**6
_CHUNK = 1 << 18


@dataclass(frozen=True)
class OracleReport:
    objective: Any
    n_optima: int
    optimum: Any
    space_size: int
    min_feasible_cost: Any = None


def _cap(size: int, limit: int, what: str):
    if size > limit:
        raise TooLargeError(f"{what}: {size} exceeds the oracle cap of {limit}")


def _masks(n: int):
    """All subset masks of ``n`` bits as ``(masks, bit matrix)`` chunks."""
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        yield masks, ((masks[:, None] >> shifts) & 1).astype(np.int64)


def _ids_of(mask: int, ids: Sequence) -> list:
    return [ids[j] for j in range(len(ids)) if mask >> j & 1]


# base problems ----------------------------------------------------------------


def oracle_knapsack(inst: KnapsackInstance) -> OracleReport:
    items = inst.items
    n = len(items)
    _cap(n, MAX_KNAPSACK_ITEMS, "knapsack items")
    ids = [it.id for it in items]
    p = np.array([it.profit.tenths for it in items], dtype=np.int64)
    w = np.array([it.weight.tenths for it in items], dtype=np.int64)
    best = None
    winners: list[int] = []
    for masks, bits in _masks(n):
        prof = bits @ p if n else np.zeros(len(masks), dtype=np.int64)
        wt = bits @ w if n else np.zeros(len(masks), dtype=np.int64)
        ok = wt <= inst.capacity.tenths
        if not ok.any():
            continue
        top = int(prof[ok].max())
        hit = masks[ok & (prof == top)]
        if best is None or top > best:
            best, winners = top, hit.tolist()
        elif top == best:
            winners.extend(hit.tolist())
    canon = min(winners, key=lambda m: ids_key(_ids_of(m, ids)))
    return OracleReport(Money(best), len(winners), frozenset(_ids_of(canon, ids)), 1 << n)


def oracle_multiple_choice(inst: MultipleChoiceInstance) -> OracleReport:
    space = 1
    for g in inst.groups:
        space *= len(g) + 1
    _cap(space, MAX_SPACE, "multiple-choice selections")
    best, winners = None, []
    for pick in product(*[[None] + list(g) for g in inst.groups]):
        chosen = [it for it in pick if it is not None]
        if sum(it.weight.tenths for it in chosen) > inst.capacity.tenths:
            continue
        val = sum(it.profit.tenths for it in chosen)
        ids = tuple(None if it is None else it.id for it in pick)
        if best is None or val > best:
            best, winners = val, [ids]
        elif val == best:
            winners.append(ids)
    canon = min(winners, key=lambda t: ids_key(c for c in t if c is not None))
    return OracleReport(Money(best), len(winners), canon, space)


def oracle_assignment(inst: AssignmentInstance) -> OracleReport:
    n = inst.n
    _cap(n, 8, "assignment size")
    best, winners, space = None, [], 0
    for perm in permutations(range(1, n + 1)):
        space += 1
        val = inst.value(perm)
        if best is None or val > best:
            best, winners = val, [perm]
        elif val == best:
            winners.append(perm)
    return OracleReport(best, len(winners), Permutation(min(winners)), space)


def _spanning_trees(vertices: frozenset, edges: Sequence):
    need = len(vertices) - 1
    if need < 0:
        return
    for combo in combinations(edges, need):
        if is_spanning_tree(combo, vertices):
            yield frozenset(combo)


def oracle_mst(g: WeightedGraph) -> OracleReport:
    es = sorted_edges(e for e in g.edges if e[0] in g.vertices and e[1] in g.vertices)
    n = len(g.vertices)
    space = _n_choose(len(es), max(n - 1, 0))
    _cap(space, MAX_SPACE, "edge subsets")
    best = None
    count = 0
    for t in _spanning_trees(g.vertices, es):
        sol = TreeSolution(t, frozenset(), g.weight_of(t))
        k = tree_key(g, sol)
        if best is None or sol.weight < best[1].weight:
            best, count = (k, sol), 1
        elif sol.weight == best[1].weight:
            count += 1
            if k < best[0]:
                best = (k, sol)
    if best is None:
        return OracleReport(None, 0, None, space)
    return OracleReport(best[1].weight, count, best[1], space)


def _n_choose(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


def oracle_steiner(g: WeightedGraph, terminals=None) -> OracleReport:
    terms = frozenset(g.vertices if terminals is None else terminals)
    zs = sorted_ids(g.steiner)
    best, count, space = None, 0, 0
    for r in range(len(zs) + 1):
        for subset in combinations(zs, r):
            keep = terms | frozenset(subset)
            es = sorted_edges(e for e in g.edges if e[0] in keep and e[1] in keep)
            space += _n_choose(len(es), len(keep) - 1)
            _cap(space, MAX_SPACE, "Steiner edge subsets")
            for t in _spanning_trees(keep, es):
                sol = TreeSolution(t, frozenset(subset), g.weight_of(t))
                k = tree_key(g, sol)
                if best is None or sol.weight < best[1].weight:
                    best, count = (k, sol), 1
                elif sol.weight == best[1].weight:
                    count += 1
                    if k < best[0]:
                        best = (k, sol)
    if best is None:
        return OracleReport(None, 0, None, space)
    return OracleReport(best[1].weight, count, best[1], space)


def oracle_hmmd(sys: MorphSystem) -> OracleReport:
    """Pareto front of all admissible composites by plain enumeration."""
    _cap(sys.size, MAX_CANDIDATES, "composites")
    pool = []
    for pick in product(*[[da.id for da in c.alternatives] for c in sys.components]):
        q = evaluate_composite(sys, pick)
        if q.w.w >= 1:
            pool.append((pick, q))
    rep = oracle_pareto(pool)
    return OracleReport(None, rep.n_optima, rep.optimum, sys.size)


def oracle_pareto(items: Sequence[tuple]) -> OracleReport:
    """All-pairs Pareto filter.

    Items are ``(id, QualityVector)`` (maximised on the quality poset) or
    ``(id, tuple)`` (minimised componentwise). The optimum is the front as a
    frozenset of ids.
    """
    _cap(len(items), MAX_CANDIDATES, "Pareto candidates")
    front = []
    for i, (key, v) in enumerate(items):
        dominated = False
        for j, (_, u) in enumerate(items):
            if i == j:
                continue
            if isinstance(v, QualityVector):
                d = dominates_quality(u, v)
            else:
                d = dominates_min(tuple(u), tuple(v))
            if d is Dominance.DOMINATES:
                dominated = True
                break
        if not dominated:
            front.append(key)
    return OracleReport(None, len(front), frozenset(front), len(items))


# restructuring --------------------------------------------------------------


class _Best:
    """Running optimum under a shared plan key, with a count of ties on value."""

    def __init__(self):
        self.key = None
        self.value = None
        self.payload = None
        self.count = 0
        self.min_cost = None

    def feasible(self, cost):
        if self.min_cost is None or cost < self.min_cost:
            self.min_cost = cost

    def offer(self, value, key, payload, better_is_higher=True):
        if self.value is None:
            self.value, self.key, self.payload, self.count = value, key, payload, 1
            return
        if value == self.value:
            self.count += 1
            if key < self.key:
                self.key, self.payload = key, payload
        elif (value > self.value) == better_is_higher:
            self.value, self.key, self.payload, self.count = value, key, payload, 1

    def report(self, space) -> OracleReport:
        return OracleReport(self.value, self.count, self.payload, space, self.min_cost)


def _h(costs, i, which):
    return Money.of(costs[i][which]) if i in costs else ZERO


def _restructure_knapsack(inputs, budget: Money) -> OracleReport:
    s0 = frozenset(getattr(inputs["s0"], "ids", inputs["s0"]))
    goal: KnapsackInstance = inputs["goal"]
    costs = inputs["costs"]
    fixed = frozenset(inputs.get("fixed", ()))
    by_id = goal.by_id
    changeable = frozenset(costs) - fixed
    gone = sorted_ids(i for i in s0 if i not in by_id)
    dels = sorted_ids(i for i in s0 if i in by_id and i in changeable)
    adds = sorted_ids(i for i in by_id if i not in s0 and i in changeable)
    universe = dels + adds
    _cap(len(universe), MAX_UNIVERSE, "change-op universe")
    forced = sum(_h(costs, i, 0).tenths for i in gone)
    kept = [i for i in s0 if i in by_id]
    base_p = sum(by_id[i].profit.tenths for i in kept)
    base_w = sum(by_id[i].weight.tenths for i in kept)
    gain = np.array([-by_id[i].profit.tenths for i in dels] + [by_id[i].profit.tenths for i in adds], dtype=np.int64)
    load = np.array([-by_id[i].weight.tenths for i in dels] + [by_id[i].weight.tenths for i in adds], dtype=np.int64)
    cost = np.array([_h(costs, i, 0).tenths for i in dels] + [_h(costs, i, 1).tenths for i in adds], dtype=np.int64)
    m = len(universe)
    best = _Best()
    hits: list[int] = []
    top = None
    for masks, bits in _masks(m):
        g = bits @ gain if m else np.zeros(len(masks), dtype=np.int64)
        ld = bits @ load if m else np.zeros(len(masks), dtype=np.int64)
        c = (bits @ cost if m else np.zeros(len(masks), dtype=np.int64)) + forced
        fits = base_w + ld <= goal.capacity.tenths
        if fits.any():
            best.feasible(Money(int(c[fits].min())))
        ok = fits & (c <= budget.tenths)
        if not ok.any():
            continue
        t = int(g[ok].max())
        hit = masks[ok & (g == t)].tolist()
        if top is None or t > top:
            top, hits = t, hit
        elif t == top:
            hits.extend(hit)
    if top is None:
        return OracleReport(None, 0, None, 1 << m, best.min_cost)
    for mask in hits:
        chosen = _ids_of(mask, universe)
        ops = [ChangeOp(OpKind.DELETE_ELEMENT, (i,), _h(costs, i, 0), ZERO, (id_key(i),)) for i in gone]
        ops += [
            ChangeOp(OpKind.DELETE_ELEMENT, (i,), _h(costs, i, 0), ZERO, (id_key(i),)) for i in chosen if i in s0
        ]
        ops += [
            ChangeOp(OpKind.ADD_ELEMENT, (i,), _h(costs, i, 1), ZERO, (id_key(i),)) for i in chosen if i not in s0
        ]
        c = sum(op.cost.tenths for op in ops)
        ids = (s0 - {i for i in chosen if i in s0} - set(gone)) | {i for i in chosen if i not in s0}
        best.offer(top, plan_key(top, ops, c), frozenset(ids))
    rep = best.report(1 << m)
    return OracleReport(Money(base_p + top), rep.n_optima, rep.optimum, rep.space_size, rep.min_feasible_cost)


def _restructure_multiple_choice(inputs, budget: Money) -> OracleReport:
    goal: MultipleChoiceInstance = inputs["goal"]
    costs = inputs["costs"]
    m0 = tuple(getattr(inputs["m0"], "chosen", inputs["m0"]))
    target = inputs.get("target")
    aim = tuple(getattr(target, "chosen", target)) if target is not None else None
    choices = []
    n_ops = 0
    for gi, group in enumerate(goal.groups):
        ids = [it.id for it in group]
        cur = m0[gi]
        if aim is not None:
            opts = [cur, aim[gi]] if aim[gi] != cur else [cur]
        else:
            opts = [cur] + [i for i in ids if i != cur] + ([None] if cur is not None else [])
        if cur is not None and cur not in ids:
            opts = [o for o in opts if o != cur]
        n_ops += len(opts) - (1 if cur in opts else 0)
        choices.append(opts)
    _cap(n_ops, MAX_UNIVERSE, "change-op universe")
    by_id = goal.by_id
    best = _Best()
    space = 0
    for pick in product(*choices):
        space += 1
        if sum(by_id[c].weight.tenths for c in pick if c is not None) > goal.capacity.tenths:
            continue
        ops = []
        for gi, (a, b) in enumerate(zip(m0, pick)):
            if a == b:
                continue
            h = (_h(costs, a, 0) if a is not None else ZERO) + (_h(costs, b, 1) if b is not None else ZERO)
            if a is None:
                kind, subj = OpKind.ADD_ELEMENT, (b,)
            elif b is None:
                kind, subj = OpKind.DELETE_ELEMENT, (a,)
            else:
                kind, subj = OpKind.REPLACE_IN_GROUP, (a, b)
            ops.append(ChangeOp(kind, subj, h, ZERO, (gi,)))
        c = sum(op.cost.tenths for op in ops)
        best.feasible(Money(c))
        if c > budget.tenths:
            continue
        val = sum(by_id[x].profit.tenths for x in pick if x is not None)
        base = sum(by_id[x].profit.tenths for x in m0 if x is not None and x in by_id)
        best.offer(Money(val), plan_key(val - base, ops, c), pick)
    return best.report(space)


def _restructure_assignment(inputs, budget: Money) -> OracleReport:
    s1 = inputs["s1"]
    ops = inputs.get("ops")
    if ops is None:
        return _assignment_full(s1, inputs["goal"], inputs["costs"], budget)
    _cap(len(ops), MAX_UNIVERSE, "change-op universe")
    current = {i + 1: p for i, p in enumerate(s1.s)} if isinstance(s1, Permutation) else dict(s1)
    capacity = inputs.get("capacity")
    best = _Best()
    for r in range(len(ops) + 1):
        for sel in combinations(ops, r):
            if len({op.subject[0] for op in sel}) != len(sel):
                continue
            after = dict(current)
            for op in sel:
                after[op.subject[0]] = op.subject[2]
            load = Counter(after.values())
            if isinstance(s1, Permutation) and len(load) != len(after):
                continue
            if capacity is not None and any(n > capacity.get(p, 0) for p, n in load.items()):
                continue
            c = sum(Money.of(op.cost).tenths for op in sel)
            best.feasible(Money(c))
            if c > budget.tenths:
                continue
            val = sum(Money.of(op.profit).tenths for op in sel)
            labels = frozenset(op.label or op.describe() for op in sel)
            best.offer(Money(val), plan_key(val, sel, c), labels)
    return best.report(1 << len(ops))


def _assignment_full(s1: Permutation, goal: AssignmentInstance, costs, budget: Money) -> OracleReport:
    n = goal.n
    _cap(n, 8, "assignment size")
    best = _Best()
    space = 0
    for perm in permutations(range(1, n + 1)):
        space += 1
        ops = []
        for i, (a, b) in enumerate(zip(s1.s, perm)):
            if a != b:
                cost = Money.of(costs[(i + 1, a)][0]) + Money.of(costs[(i + 1, b)][1])
                ops.append(ChangeOp(OpKind.REASSIGN_POSITION, (i + 1, a, b), cost, ZERO, ((0, i + 1),)))
        c = sum(op.cost.tenths for op in ops)
        best.feasible(Money(c))
        if c > budget.tenths:
            continue
        val = goal.value(perm).tenths
        best.offer(Money(val), plan_key(val, ops, c), Permutation(perm))
    return best.report(space)


def _edge_cost(costs, default, e, which):
    if costs and e in costs:
        return Money.of(costs[e][which])
    return Money.of(default)


def _norm_costs(costs):
    out = {}
    for k, v in (costs or {}).items():
        out[edge(*k) if isinstance(k, tuple) and len(k) == 2 else k] = v
    return out


def _tree_rho(goal, proximity, es, target, opt_weight):
    if proximity == "weight-delta":
        return goal.weight_of(es) - opt_weight
    return len(es ^ target)


def _restructure_tree(inputs, budget: Money) -> OracleReport:
    from .restructure.trees import DEFAULT_EDGE_COST

    goal: WeightedGraph = inputs["goal"]
    t1 = inputs["t1"]
    old = frozenset(edge(*e) for e in getattr(t1, "edges", t1))
    costs = _norm_costs(inputs.get("costs"))
    default = inputs.get("default_cost", DEFAULT_EDGE_COST)
    proximity = inputs.get("proximity", "edge-symmetric-difference")
    opt = oracle_mst(goal).optimum
    target = inputs.get("target")
    tgt = frozenset(edge(*e) for e in target) if target is not None else opt.edges
    es_all = sorted_edges(goal.edges)
    space = _n_choose(len(es_all), len(goal.vertices) - 1)
    _cap(space, MAX_SPACE, "edge subsets")
    best = _Best()
    for t in _spanning_trees(goal.vertices, es_all):
        ops = [
            ChangeOp(OpKind.DELETE_EDGE, e, _edge_cost(costs, default, e, 0), ZERO, ((0, edge_key(e)),))
            for e in old - t
        ] + [
            ChangeOp(OpKind.ADD_EDGE, e, _edge_cost(costs, default, e, 1), ZERO, ((0, edge_key(e)),)) for e in t - old
        ]
        c = sum(op.cost.tenths for op in ops)
        best.feasible(Money(c))
        if c > budget.tenths:
            continue
        rho = _tree_rho(goal, proximity, t, tgt, opt.weight)
        r_units = rho.tenths if isinstance(rho, Money) else rho
        tail = [edge_key(e) for e in sorted_edges(t)]
        best.offer(rho, plan_key(-r_units, ops, c, tail), t, better_is_higher=False)
    return best.report(space)


def _restructure_steiner(inputs, budget: Money) -> OracleReport:
    from .restructure.trees import DEFAULT_EDGE_COST

    goal: WeightedGraph = inputs["goal"]
    s1: TreeSolution = inputs["s1"]
    old = frozenset(edge(*e) for e in s1.edges)
    old_z = frozenset(s1.steiner)
    costs = _norm_costs(inputs.get("costs"))
    zcosts = inputs.get("steiner_costs") or {}
    default = inputs.get("default_cost", DEFAULT_EDGE_COST)
    proximity = inputs.get("proximity", "weight-delta")
    terms = frozenset(inputs.get("terminals") or goal.vertices)
    opt = oracle_steiner(goal, terms).optimum
    target = inputs.get("target")
    tgt = frozenset(edge(*e) for e in getattr(target, "edges", target)) if target is not None else opt.edges
    zs = sorted_ids(goal.steiner)
    best = _Best()
    space = 0
    for r in range(len(zs) + 1):
        for subset in combinations(zs, r):
            zset = frozenset(subset)
            zops = [
                ChangeOp(
                    OpKind.DELETE_STEINER_VERTEX,
                    (z,),
                    Money.of(zcosts[z][0]) if z in zcosts else Money.of(default),
                    ZERO,
                    ((1, id_key(z)),),
                )
                for z in old_z - zset
            ] + [
                ChangeOp(
                    OpKind.ADD_STEINER_VERTEX,
                    (z,),
                    Money.of(zcosts[z][1]) if z in zcosts else Money.of(default),
                    ZERO,
                    ((1, id_key(z)),),
                )
                for z in zset - old_z
            ]
            keep = terms | zset
            es = sorted_edges(e for e in goal.edges if e[0] in keep and e[1] in keep)
            space += _n_choose(len(es), len(keep) - 1)
            _cap(space, MAX_SPACE, "Steiner edge subsets")
            for t in _spanning_trees(keep, es):
                ops = [
                    ChangeOp(OpKind.DELETE_EDGE, e, _edge_cost(costs, default, e, 0), ZERO, ((0, edge_key(e)),))
                    for e in old - t
                ] + [
                    ChangeOp(OpKind.ADD_EDGE, e, _edge_cost(costs, default, e, 1), ZERO, ((0, edge_key(e)),))
                    for e in t - old
                ]
                allops = ops + zops
                c = sum(op.cost.tenths for op in allops)
                best.feasible(Money(c))
                if c > budget.tenths:
                    continue
                rho = _tree_rho(goal, proximity, t, tgt, opt.weight)
                r_units = rho.tenths if isinstance(rho, Money) else rho
                tail = [edge_key(e) for e in sorted_edges(t)]
                best.offer(rho, plan_key(-r_units, allops, c, tail), (zset, t), better_is_higher=False)
    return best.report(space)


def _restructure_clustering(inputs, budget: Money) -> OracleReport:
    x1: Partition = inputs["x1"]
    ops = list(inputs["ops"])
    model = inputs.get("model", "knapsack")
    _cap(len(ops), MAX_UNIVERSE, "change-op universe")
    if model == "knapsack" and len({op.subject[0] for op in ops}) != len(ops):
        raise InputError("knapsack model needs at most one op per element")
    best = _Best()
    for r in range(len(ops) + 1):
        for sel in combinations(ops, r):
            if len({op.subject[0] for op in sel}) != len(sel):
                continue
            sizes = [len(c) for c in x1.clusters]
            for op in sel:
                sizes[op.subject[1] - 1] -= 1
                sizes[op.subject[2] - 1] += 1
            if any(s <= 0 for s in sizes):
                continue
            c = sum(Money.of(op.cost).tenths for op in sel)
            best.feasible(Money(c))
            if c > budget.tenths:
                continue
            val = sum(Money.of(op.profit).tenths for op in sel)
            best.offer(Money(val), plan_key(val, sel, c), frozenset(op.subject for op in sel))
    return best.report(1 << len(ops))


def _restructure_ranking(inputs, budget: Money) -> OracleReport:
    r1: LayeredRanking = inputs["r1"]
    r2: LayeredRanking = inputs["r2"]
    costs = inputs.get("move_costs") or {}
    default = inputs.get("default_cost", 1)
    w1, w2 = r1.where(), r2.where()
    elems = sorted_ids(w1)
    space = r1.k ** len(elems)
    _cap(space, MAX_SPACE, "layer assignments")
    best = _Best()
    for layers in product(range(1, r1.k + 1), repeat=len(elems)):
        if len(set(layers)) != r1.k:
            continue  # some layer would be empty
        ops = []
        for e, layer in zip(elems, layers):
            if layer != w1[e]:
                gain = abs(w1[e] - w2[e]) - abs(layer - w2[e])
                ops.append(move_op(e, w1[e], layer, costs.get((e, layer), default), gain))
        c = sum(op.cost.tenths for op in ops)
        best.feasible(Money(c))
        if c >= budget.tenths:
            continue
        delta = sum(abs(layer - w2[e]) for e, layer in zip(elems, layers))
        gain = layer_distance(r1, r2) - delta
        best.offer(delta, plan_key(gain, ops, c), layers, better_is_higher=False)
    rep = best.report(space)
    if rep.optimum is None:
        return rep
    clusters = [frozenset(e for e, l in zip(elems, rep.optimum) if l == j) for j in range(1, r1.k + 1)]
    return OracleReport(rep.objective, rep.n_optima, LayeredRanking(tuple(clusters)), space, rep.min_feasible_cost)


def _restructure_hmmd(inputs, budget) -> OracleReport:
    goal: MorphSystem = inputs["goal"]
    before = tuple(getattr(inputs["t0"], "choice", inputs["t0"]))
    costs = inputs.get("costs")
    ref = inputs.get("reference") or goal_reference(goal)
    money = budget is not None and not isinstance(budget, int)
    _cap(goal.size, MAX_CANDIDATES, "composites")
    rows = []
    min_cost = None
    for pick in product(*[[da.id for da in c.alternatives] for c in goal.components]):
        q = evaluate_composite(goal, pick)
        if q.w.w < 1:
            continue
        ops = change_ops(before, pick, costs if money else None)
        spent = sum((op.cost for op in ops), ZERO) if money else len(ops)
        min_cost = spent if min_cost is None or spent < min_cost else min_cost
        if budget is not None and spent > (Money.of(budget) if money else budget):
            continue
        rho = hmmd_proximity(q, ref)
        rows.append((pick, (spent.tenths if money else spent, *rho)))
    rep = oracle_pareto(rows)
    return OracleReport(None, rep.n_optima, rep.optimum, goal.size, min_cost)


_KINDS = {
    "knapsack": _restructure_knapsack,
    "multiple-choice": _restructure_multiple_choice,
    "assignment": _restructure_assignment,
    "spanning-tree": _restructure_tree,
    "steiner-tree": _restructure_steiner,
    "clustering": _restructure_clustering,
    "ranking": _restructure_ranking,
    "hmmd": _restructure_hmmd,
}


def oracle_restructure(kind: str, inputs: Mapping, budget) -> OracleReport:
    """Exhaustive restructuring optimum for one problem kind.

    ``objective`` is the goal-stage profit for knapsack, multiple-choice,
    assignment and clustering, the proximity for trees, and the layer
    distance for rankings. For ``hmmd`` the optimum is the Pareto set of
    composites. ``min_feasible_cost`` is the cheapest change that yields a
    goal-feasible solution, whatever the budget.
    """
    if kind not in _KINDS:
        raise InputError(f"unknown problem kind {kind!r}")
    if kind == "hmmd":
        return _restructure_hmmd(inputs, budget)
    budget = Money.of(budget)
    return _KINDS[kind](inputs, budget)
