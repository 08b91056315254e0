"""Restructuring of spanning and Steiner trees.

A tree ``T1`` is turned into a tree ``T*`` of the goal graph. The change cost
charges ``h-`` for every edge of ``T1`` that leaves and ``h+`` for every edge
that enters (plus ``w-``/``w+`` for Steiner vertices). Proximity to the goal
is either the edge symmetric difference to a target tree or the weight gap to
the goal optimum. Both are sums over the edges of ``T*``, so the search is a
spanning-tree enumeration with a budget cut and a Kruskal completion bound.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from ..errors import InfeasibleWithBudgetError, InputError, InvalidInstanceError, TooLargeError
from ..ids import id_key, sorted_ids
from ..money import ZERO, Money
from ..solvers.trees import (
    TreeSolution,
    WeightedGraph,
    edge,
    edge_key,
    minimum_spanning_tree,
    sorted_edges,
    steiner_tree,
)
from .model import ChangeOp, OpKind, RestructurePlan, diff_sets, plan_key

PROXIMITIES = ("edge-symmetric-difference", "weight-delta")
MAX_VERTICES = 12
MAX_STEINER = 10
DEFAULT_EDGE_COST = Money(10)


class _Costs:
    def __init__(self, pairs: Mapping | None, default: Money):
        self.pairs = {}
        for k, (m, p) in (pairs or {}).items():
            key = edge(*k) if isinstance(k, tuple) and len(k) == 2 else k
            self.pairs[key] = (Money.of(m), Money.of(p))
        self.default = Money.of(default)

    def minus(self, k) -> Money:
        return self.pairs[k][0] if k in self.pairs else self.default

    def plus(self, k) -> Money:
        return self.pairs[k][1] if k in self.pairs else self.default


def _components_after(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return find


def _search(
    vertices: frozenset,
    candidates: list,
    rho: Mapping,
    cost: Mapping,
    budget: int,
    top: int,
    forced_cost: int,
    extra_ops: list,
    op_builder,
):
    """Best spanning trees over ``candidates`` by summed ``rho`` within ``budget``.

    ``cost[e]`` is charged when edge ``e`` is taken and ``cost[("x", e)]``
    when it is left out. ``op_builder`` turns an edge set into change ops for
    the tie-break. Returns ``[(key, rho_total, edges, cost_total)]``.
    """
    need = len(vertices) - 1
    order = sorted(candidates, key=edge_key)
    kept: list = []

    def completion_bound(chosen, pos) -> int | None:
        # cheapest rho to finish the tree with the remaining edges, or None
        find = _components_after(vertices, chosen)
        roots = {v: find(v) for v in vertices}
        parent = {r: r for r in set(roots.values())}

        def f(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        total, joined = 0, 0
        for e in sorted(order[pos:], key=lambda e: rho[e]):
            a, b = f(roots[e[0]]), f(roots[e[1]])
            if a != b:
                parent[a] = b
                total += rho[e]
                joined += 1
        if len(chosen) + joined != need:
            return None
        return total

    def record(chosen, r, c):
        ops = op_builder(frozenset(chosen)) + extra_ops
        key = plan_key(-r, ops, c, [edge_key(e) for e in sorted_edges(chosen)])
        kept.append((key, r, tuple(chosen), c))
        kept.sort(key=lambda t: t[0])
        del kept[top:]

    def dfs(pos, chosen, r, c):
        if c > budget:
            return
        if len(chosen) == need:
            # remaining edges are all excluded; charge their exclusion cost
            rest = sum(cost[("x", e)] for e in order[pos:])
            if c + rest <= budget:
                record(chosen, r, c + rest)
            return
        if pos == len(order):
            return
        bound = completion_bound(chosen, pos)
        if bound is None:
            return
        if len(kept) >= top and r + bound > kept[-1][1]:
            return
        e = order[pos]
        find = _components_after(vertices, chosen)
        if find(e[0]) != find(e[1]):
            chosen.append(e)
            dfs(pos + 1, chosen, r + rho[e], c + cost[e])
            chosen.pop()
        dfs(pos + 1, chosen, r, c + cost[("x", e)])

    if need < 0:
        return []
    dfs(0, [], 0, forced_cost)
    return kept


def _tree_ops(t1_edges: frozenset, new_edges: frozenset, costs: _Costs) -> list[ChangeOp]:
    ops = []
    for e in t1_edges - new_edges:
        ops.append(ChangeOp(OpKind.DELETE_EDGE, e, costs.minus(e), ZERO, ((0, edge_key(e)),)))
    for e in new_edges - t1_edges:
        ops.append(ChangeOp(OpKind.ADD_EDGE, e, costs.plus(e), ZERO, ((0, edge_key(e)),)))
    return ops


def _rho_weights(g: WeightedGraph, edges, proximity: str, target: frozenset | None) -> dict:
    if proximity == "weight-delta":
        return {e: g.weights[e].tenths for e in edges}
    return {e: (-1 if e in target else 1) for e in edges}


def _proximity_value(g, proximity, r_total: int, target, opt_weight: Money):
    if proximity == "weight-delta":
        return Money(r_total) - opt_weight
    return r_total + len(target)


def _check(proximity, budget):
    if proximity not in PROXIMITIES:
        raise InputError(f"unknown proximity {proximity!r}")
    budget = Money.of(budget)
    if budget < ZERO:
        raise InputError("budget must be non-negative")
    return budget


def restructure_tree(
    t1: TreeSolution | Iterable,
    goal: WeightedGraph,
    costs: Mapping | None,
    budget,
    proximity: str = "edge-symmetric-difference",
    target: Iterable | None = None,
    default_cost=DEFAULT_EDGE_COST,
    top: int = 1,
):
    """Spanning tree of ``goal`` closest to the target within the change budget.

    The target defaults to the goal graph's minimum spanning tree. Edge costs
    missing from ``costs`` fall back to ``default_cost``.
    """
    budget = _check(proximity, budget)
    if len(goal.vertices) > MAX_VERTICES:
        raise TooLargeError(f"{len(goal.vertices)} vertices exceeds {MAX_VERTICES}")
    hc = _Costs(costs, default_cost)
    old = frozenset(edge(*e) for e in getattr(t1, "edges", t1))
    opt = minimum_spanning_tree(goal)
    tgt = frozenset(edge(*e) for e in target) if target is not None else opt.edges
    cands = sorted_edges(goal.edges)
    gone = old - goal.edges
    forced = sum(hc.minus(e).tenths for e in gone)
    cost = {e: (0 if e in old else hc.plus(e).tenths) for e in cands}
    cost.update({("x", e): (hc.minus(e).tenths if e in old else 0) for e in cands})
    rho = _rho_weights(goal, cands, proximity, tgt)

    kept = _search(
        goal.vertices, cands, rho, cost, budget.tenths, max(1, top), forced, [], lambda ch: _tree_ops(old, ch, hc)
    )
    if not kept:
        raise InfeasibleWithBudgetError(f"no spanning tree of the goal graph within budget {budget}")
    plans = []
    for _, r, es, c in kept:
        es = frozenset(es)
        sol = TreeSolution(es, frozenset(), goal.weight_of(es))
        plans.append(
            RestructurePlan(
                ops=tuple(_tree_ops(old, es, hc)),
                solution=sol,
                cost=Money(c),
                proximity=_proximity_value(goal, proximity, r, tgt, opt.weight),
                objective=sol.weight,
                diff=diff_sets(old, es),
            )
        )
    return plans if top > 1 else plans[0]


def restructure_steiner(
    s1: TreeSolution,
    goal: WeightedGraph,
    costs: Mapping | None,
    steiner_costs: Mapping | None,
    budget,
    proximity: str = "weight-delta",
    target: TreeSolution | Iterable | None = None,
    terminals: Iterable | None = None,
    default_cost=DEFAULT_EDGE_COST,
    top: int = 1,
):
    """Steiner tree of ``goal`` closest to the goal optimum within the change budget.

    Every subset ``Z*`` of the Steiner candidates is tried; leaving a Steiner
    vertex of ``s1`` costs ``w-`` and bringing one in costs ``w+``.
    """
    budget = _check(proximity, budget)
    zs = sorted_ids(goal.steiner)
    if len(zs) > MAX_STEINER:
        raise TooLargeError(f"{len(zs)} Steiner candidates exceeds {MAX_STEINER}")
    terms = frozenset(goal.vertices if terminals is None else terminals)
    if not terms <= goal.vertices:
        raise InvalidInstanceError("terminals must be graph vertices")
    if len(terms) + len(zs) > MAX_VERTICES:
        raise TooLargeError(f"{len(terms) + len(zs)} vertices exceeds {MAX_VERTICES}")
    hc = _Costs(costs, default_cost)
    wc = _Costs(steiner_costs, default_cost)
    old = frozenset(edge(*e) for e in s1.edges)
    old_z = frozenset(s1.steiner)
    opt = steiner_tree(goal, terms)
    if target is None:
        tgt = opt.edges
    else:
        tgt = frozenset(edge(*e) for e in getattr(target, "edges", target))

    pool = []
    for r in range(len(zs) + 1):
        for subset in combinations(zs, r):
            zset = frozenset(subset)
            zops = [
                ChangeOp(OpKind.DELETE_STEINER_VERTEX, (z,), wc.minus(z), ZERO, ((1, id_key(z)),))
                for z in old_z - zset
            ] + [
                ChangeOp(OpKind.ADD_STEINER_VERTEX, (z,), wc.plus(z), ZERO, ((1, id_key(z)),))
                for z in zset - old_z
            ]
            zcost = sum(op.cost.tenths for op in zops)
            keep = terms | zset
            cands = sorted_edges(e for e in goal.edges if e[0] in keep and e[1] in keep)
            gone = old - frozenset(cands)
            forced = zcost + sum(hc.minus(e).tenths for e in gone)
            if forced > budget.tenths:
                continue
            cost = {e: (0 if e in old else hc.plus(e).tenths) for e in cands}
            cost.update({("x", e): (hc.minus(e).tenths if e in old else 0) for e in cands})
            rho = _rho_weights(goal, cands, proximity, tgt)
            found = _search(
                keep, cands, rho, cost, budget.tenths, max(1, top), forced, zops, lambda ch: _tree_ops(old, ch, hc)
            )
            for key, rr, es, c in found:
                pool.append((key, rr, frozenset(es), c, zset, zops))
    if not pool:
        raise InfeasibleWithBudgetError(f"no Steiner tree of the goal graph within budget {budget}")
    pool.sort(key=lambda t: t[0])
    plans = []
    for _, rr, es, c, zset, zops in pool[: max(1, top)]:
        sol = TreeSolution(es, zset, goal.weight_of(es))
        plans.append(
            RestructurePlan(
                ops=tuple(_tree_ops(old, es, hc) + zops),
                solution=sol,
                cost=Money(c),
                proximity=_proximity_value(goal, proximity, rr, tgt, opt.weight),
                objective=sol.weight,
                diff=diff_sets(old, es),
                steiner_diff=diff_sets(old_z, zset),
            )
        )
    return plans if top > 1 else plans[0]
