"""Restructuring of clusterings and layered rankings by moving single elements."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..errors import InfeasibleWithBudgetError, InputError, InvalidInstanceError, InvalidOpsError
from ..ids import id_key, sorted_ids
from ..money import ZERO, Money
from .engine import Option, select
from .model import ChangeOp, OpKind, RestructurePlan, diff_sets

MODELS = ("knapsack", "multiple-choice")


@dataclass(frozen=True)
class Partition:
    """Clusters ``X_1..X_k``; positions are 1-based in ops and reports."""

    clusters: tuple[frozenset, ...]

    def __post_init__(self):
        cl = tuple(frozenset(c) for c in self.clusters)
        object.__setattr__(self, "clusters", cl)
        seen = set()
        for c in cl:
            if seen & c:
                raise InvalidInstanceError("clusters overlap")
            seen |= c

    @property
    def universe(self) -> frozenset:
        return frozenset().union(*self.clusters) if self.clusters else frozenset()

    @property
    def k(self) -> int:
        return len(self.clusters)

    def where(self) -> dict:
        return {e: j + 1 for j, c in enumerate(self.clusters) for e in c}

    def listing(self) -> list[list]:
        return [sorted_ids(c) for c in self.clusters]


class LayeredRanking(Partition):
    """Layers ``R_1 -> ... -> R_k``, best first."""


def apply_moves(x: Partition, moves: Iterable[tuple]) -> Partition:
    """Apply ``(element, src, dst)`` moves; the result keeps ``x``'s type."""
    where = x.where()
    for e, src, dst in moves:
        if where.get(e) != src:
            raise InvalidOpsError(f"element {e!r} is not in cluster {src}")
        if not 1 <= dst <= x.k:
            raise InvalidOpsError(f"cluster {dst} out of range")
        where[e] = dst
    clusters = [set() for _ in range(x.k)]
    for e, j in where.items():
        clusters[j - 1].add(e)
    return type(x)(tuple(frozenset(c) for c in clusters))


def move_op(element, src: int, dst: int, cost, profit, label=None) -> ChangeOp:
    return ChangeOp(
        OpKind.MOVE_BETWEEN_CLUSTERS, (element, src, dst), Money.of(cost), Money.of(profit), (id_key(element),), label
    )


def moves_toward(x1: Partition, x2: Partition, costs: Mapping | None = None, default_cost=1) -> list[ChangeOp]:
    """One move per element whose cluster index differs between ``x1`` and ``x2``.

    Each move earns one unit, the element it places correctly. Ops are
    labelled ``O1, O2, ...`` in element order.
    """
    if x1.universe != x2.universe or x1.k != x2.k:
        raise InvalidInstanceError("partitions must share elements and cluster count")
    w1, w2 = x1.where(), x2.where()
    ops = []
    for e in sorted_ids(w1):
        if w1[e] != w2[e]:
            cost = (costs or {}).get(e, default_cost)
            ops.append(move_op(e, w1[e], w2[e], cost, 1, f"O{len(ops) + 1}"))
    return ops


def misplaced(x: Partition, goal: Partition) -> int:
    wx, wg = x.where(), goal.where()
    return sum(1 for e in wx if wx[e] != wg.get(e))


def restructure_clustering(
    x1: Partition,
    ops: Sequence[ChangeOp],
    budget,
    model: str = "knapsack",
    goal: Partition | None = None,
    top: int = 1,
):
    """Pick element moves maximising summed op profit within the budget.

    The cluster count stays fixed and no cluster may end up empty. The
    knapsack model treats ops as independent and so rejects a universe with
    two ops on one element; the multiple-choice model groups ops by element
    and picks at most one per group. Proximity is the number of elements
    still misplaced relative to ``goal`` when one is given.
    """
    if model not in MODELS:
        raise InputError(f"unknown model {model!r}")
    budget = Money.of(budget)
    if budget < ZERO:
        raise InputError("budget must be non-negative")
    where = x1.where()
    seen = set()
    options = []
    for op in ops:
        if op.kind is not OpKind.MOVE_BETWEEN_CLUSTERS or len(op.subject) != 3:
            raise InvalidOpsError(f"not a move op: {op.describe()}")
        e, src, dst = op.subject
        if where.get(e) != src or not 1 <= dst <= x1.k or src == dst:
            raise InvalidOpsError(f"op {op.describe()} does not fit the current partition")
        if model == "knapsack" and e in seen:
            raise InvalidOpsError(f"two ops move element {e!r}; use the multiple-choice model")
        seen.add(e)
        group = e if model == "multiple-choice" else None
        options.append(Option(op, Money.of(op.profit).tenths, Money.of(op.cost).tenths, 0, group))

    def valid(sel) -> bool:
        sizes = [len(c) for c in x1.clusters]
        for o in sel:
            _, src, dst = o.op.subject
            sizes[src - 1] -= 1
            sizes[dst - 1] += 1
        return all(s > 0 for s in sizes)

    found = select(options, budget.tenths, valid=valid, top=max(1, top))
    if not found:
        raise InfeasibleWithBudgetError("every move set empties a cluster")
    plans = []
    for gain, sel in found:
        after = apply_moves(x1, [o.op.subject for o in sel])
        plans.append(
            RestructurePlan(
                ops=tuple(o.op for o in sel),
                solution=after,
                cost=sum((o.op.cost for o in sel), ZERO),
                proximity=misplaced(after, goal) if goal is not None else None,
                objective=Money(gain),
                diff=diff_sets(where.items(), after.where().items()),
            )
        )
    return plans if top > 1 else plans[0]


def layer_distance(a: LayeredRanking, b: LayeredRanking) -> int:
    """Total absolute layer displacement between two rankings of one element set."""
    if a.universe != b.universe:
        raise InvalidInstanceError("rankings must cover the same elements")
    wa, wb = a.where(), b.where()
    return sum(abs(wa[e] - wb[e]) for e in wa)


def restructure_ranking(
    r1: LayeredRanking,
    r2: LayeredRanking,
    move_costs: Mapping[tuple, Money] | None,
    budget,
    default_cost=1,
    top: int = 1,
):
    """Move elements between layers to approach ``r2``, spending strictly less than ``budget``.

    ``move_costs[(element, layer)]`` is the price of putting ``element`` into
    ``layer``. Every layer must stay non-empty.
    """
    if r1.k != r2.k:
        raise InvalidInstanceError(f"layer counts differ: {r1.k} vs {r2.k}")
    if r1.universe != r2.universe:
        raise InvalidInstanceError("rankings must cover the same elements")
    budget = Money.of(budget)
    if budget < ZERO:
        raise InputError("budget must be non-negative")
    w1, w2 = r1.where(), r2.where()
    costs = move_costs or {}
    options = []
    for e in sorted_ids(w1):
        for layer in range(1, r1.k + 1):
            if layer == w1[e]:
                continue
            gain = abs(w1[e] - w2[e]) - abs(layer - w2[e])
            cost = Money.of(costs.get((e, layer), default_cost))
            op = move_op(e, w1[e], layer, cost, gain)
            options.append(Option(op, gain, cost.tenths, 0, e))

    def valid(sel) -> bool:
        sizes = [len(c) for c in r1.clusters]
        for o in sel:
            _, src, dst = o.op.subject
            sizes[src - 1] -= 1
            sizes[dst - 1] += 1
        return all(s > 0 for s in sizes)

    found = select(options, budget.tenths, strict=True, valid=valid, top=max(1, top))
    if not found:
        raise InfeasibleWithBudgetError(f"budget {budget} admits no ranking (the bound is strict)")
    base = layer_distance(r1, r2)
    plans = []
    for gain, sel in found:
        after = apply_moves(r1, [o.op.subject for o in sel])
        plans.append(
            RestructurePlan(
                ops=tuple(o.op for o in sel),
                solution=after,
                cost=sum((o.op.cost for o in sel), ZERO),
                proximity=base - gain,
                objective=None,
                diff=diff_sets(w1.items(), after.where().items()),
            )
        )
    return plans if top > 1 else plans[0]
