"""Minimum spanning trees (Kruskal) and exact small Steiner trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from ..errors import InfeasibleError, InvalidInstanceError, NoSpanningTreeError, TooLargeError
from ..ids import id_key, sorted_ids
from ..money import ZERO, Money

Edge = tuple

MAX_STEINER_CANDIDATES = 15


def edge(u, v) -> Edge:
    """Undirected edge in canonical vertex order."""
    if u == v:
        raise InvalidInstanceError(f"self-loop at {u!r}")
    return (u, v) if id_key(u) <= id_key(v) else (v, u)


def edge_key(e: Edge):
    return (id_key(e[0]), id_key(e[1]))


def sorted_edges(edges: Iterable[Edge]) -> list[Edge]:
    return sorted(edges, key=edge_key)


@dataclass(frozen=True)
class WeightedGraph:
    vertices: frozenset
    weights: Mapping  # canonical edge -> Money
    steiner: frozenset = field(default=frozenset())

    def __post_init__(self):
        vs = frozenset(self.vertices)
        zs = frozenset(self.steiner)
        ws = {}
        for (u, v), w in dict(self.weights).items():
            e = edge(u, v)
            if e in ws:
                raise InvalidInstanceError(f"duplicate edge {e}")
            if u not in vs | zs or v not in vs | zs:
                raise InvalidInstanceError(f"edge {e} has an unknown endpoint")
            ws[e] = Money.of(w)
        if vs & zs:
            raise InvalidInstanceError("Steiner candidates must be disjoint from the terminals")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "steiner", zs)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable[tuple], steiner: Iterable = ()) -> "WeightedGraph":
        """From ``(u, v, w)`` triples."""
        return cls(frozenset(vertices), {(u, v): w for u, v, w in edges}, frozenset(steiner))

    @property
    def edges(self) -> frozenset:
        return frozenset(self.weights)

    @property
    def all_vertices(self) -> frozenset:
        return self.vertices | self.steiner

    def weight_of(self, edges: Iterable[Edge]) -> Money:
        return sum((self.weights[e] for e in edges), ZERO)

    def induced(self, keep: Iterable) -> "WeightedGraph":
        keep = frozenset(keep)
        return WeightedGraph(
            keep & self.vertices,
            {e: w for e, w in self.weights.items() if e[0] in keep and e[1] in keep},
            keep & self.steiner,
        )


@dataclass(frozen=True)
class TreeSolution:
    edges: frozenset
    steiner: frozenset = field(default=frozenset())
    weight: Money = ZERO

    @classmethod
    def of(cls, g: WeightedGraph, edges: Iterable[Edge], steiner: Iterable = ()) -> "TreeSolution":
        es = frozenset(edge(u, v) for u, v in edges)
        missing = [e for e in es if e not in g.weights]
        weight = sum((g.weights[e] for e in es if e in g.weights), ZERO)
        if missing:
            # trees carried over from an earlier stage may use edges the goal
            # graph lacks; their weight is unknown there
            weight = ZERO
        return cls(es, frozenset(steiner), weight)

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for e in self.edges for v in e)


class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def is_spanning_tree(edges: Iterable[Edge], vertices: Iterable) -> bool:
    vs = frozenset(vertices)
    es = list(edges)
    if len(es) != max(len(vs) - 1, 0):
        return False
    dsu = _DSU(vs)
    for u, v in es:
        if u not in vs or v not in vs or not dsu.union(u, v):
            return False
    return True


def _kruskal(vertices: frozenset, weights: Mapping) -> list[Edge] | None:
    order = sorted(weights, key=lambda e: (weights[e], edge_key(e)))
    dsu = _DSU(vertices)
    chosen = []
    for e in order:
        if dsu.union(*e):
            chosen.append(e)
            if len(chosen) == len(vertices) - 1:
                break
    if len(chosen) != max(len(vertices) - 1, 0):
        return None
    return chosen


def minimum_spanning_tree(g: WeightedGraph) -> TreeSolution:
    """Kruskal over the terminal vertices, ignoring Steiner candidates.

    Edges are scanned in (weight, edge) order, so among minimum trees the
    result has the smallest sorted (weight, edge) sequence.
    """
    sub = g.induced(g.vertices)
    chosen = _kruskal(sub.vertices, sub.weights)
    if chosen is None:
        raise NoSpanningTreeError("graph is disconnected")
    return TreeSolution(frozenset(chosen), frozenset(), g.weight_of(chosen))


def tree_key(g: WeightedGraph, t: TreeSolution):
    """Shared tie-break for tree optima: weight, Steiner ids, then edge order."""
    return (
        t.weight,
        [id_key(z) for z in sorted_ids(t.steiner)],
        sorted((g.weights[e], edge_key(e)) for e in t.edges),
    )


def steiner_tree(g: WeightedGraph, terminals: Iterable | None = None) -> TreeSolution:
    """Minimum tree over the terminals plus the best subset of Steiner candidates."""
    terms = frozenset(g.vertices if terminals is None else terminals)
    if not terms <= g.vertices:
        raise InvalidInstanceError("terminals must be graph vertices")
    zs = sorted_ids(g.steiner)
    if len(zs) > MAX_STEINER_CANDIDATES:
        raise TooLargeError(f"{len(zs)} Steiner candidates exceeds {MAX_STEINER_CANDIDATES}")
    best = None
    best_key = None
    for r in range(len(zs) + 1):
        for subset in combinations(zs, r):
            keep = terms | frozenset(subset)
            ws = {e: w for e, w in g.weights.items() if e[0] in keep and e[1] in keep}
            chosen = _kruskal(keep, ws)
            if chosen is None:
                continue
            t = TreeSolution(frozenset(chosen), frozenset(subset), g.weight_of(chosen))
            k = tree_key(g, t)
            if best is None or k < best_key:
                best, best_key = t, k
    if best is None:
        raise InfeasibleError("no subset of Steiner candidates connects the terminals")
    return best
