"""Morphological clique synthesis over ordinal priorities and compatibilities.

A system has components ``P(1)..P(m)``; each offers design alternatives (DAs)
rated by priority (1 is best). Every pair of DAs from different components has
a compatibility on ``0..l``. A composite picks one DA per component and is
admissible when all its pairwise compatibilities are nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterator, Mapping, Sequence

from ..errors import InfeasibleError, InvalidChoiceError, InvalidInstanceError, TooLargeError
from ..ids import ids_key
from ..scales import CompatibilityValue, CountVector, QualityVector, pareto_front

MAX_PRODUCT = 10**6


@dataclass(frozen=True)
class DA:
    id: str
    priority: int


@dataclass(frozen=True)
class Component:
    name: str
    alternatives: tuple[DA, ...]

    def __post_init__(self):
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if not self.alternatives:
            raise InvalidInstanceError(f"component {self.name} has no alternatives")


@dataclass(frozen=True)
class MorphSystem:
    components: tuple[Component, ...]
    compat: Mapping  # frozenset({a, b}) -> int
    k: int = 3
    l: int = 3
    _index: Mapping = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise InvalidInstanceError("system needs at least one component")
        index = {}
        for ci, c in enumerate(comps):
            for da in c.alternatives:
                if da.id in index:
                    raise InvalidInstanceError(f"DA {da.id!r} listed twice")
                if not 1 <= da.priority <= self.k:
                    raise InvalidInstanceError(f"DA {da.id!r} priority {da.priority} outside [1..{self.k}]")
                index[da.id] = (ci, da)
        table = {}
        for pair, w in dict(self.compat).items():
            pair = frozenset(pair)
            if len(pair) != 2 or not pair <= index.keys():
                raise InvalidInstanceError(f"compatibility entry for unknown pair {sorted(pair)}")
            a, b = sorted(pair)
            if index[a][0] == index[b][0]:
                raise InvalidInstanceError(f"compatibility inside one component: {a}, {b}")
            if not 0 <= int(w) <= self.l:
                raise InvalidInstanceError(f"compatibility {w} outside [0..{self.l}]")
            table[pair] = int(w)
        object.__setattr__(self, "compat", table)
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(
        cls,
        components: Mapping[str, Sequence[tuple[str, int]]],
        compat: Mapping[tuple[str, str], int],
        k: int = 3,
        l: int = 3,
    ) -> "MorphSystem":
        comps = tuple(Component(name, tuple(DA(i, p) for i, p in das)) for name, das in components.items())
        return cls(comps, {frozenset(p): w for p, w in compat.items()}, k, l)

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)

    def has(self, da_id) -> bool:
        return da_id in self._index

    def component_of(self, da_id) -> int:
        return self._index[da_id][0]

    def priority(self, da_id) -> int:
        return self._index[da_id][1].priority

    def compatibility(self, a, b) -> int:
        return self.compat.get(frozenset((a, b)), 0)

    @property
    def size(self) -> int:
        return prod(len(c.alternatives) for c in self.components)


@dataclass(frozen=True)
class CompositeSolution:
    choice: tuple[str, ...]
    quality: QualityVector

    def label(self) -> str:
        return "*".join(self.choice)


def evaluate_composite(sys: MorphSystem, choice: Sequence[str]) -> QualityVector:
    choice = tuple(choice)
    if len(choice) != sys.m:
        raise InvalidChoiceError(f"expected {sys.m} DAs, got {len(choice)}")
    for pos, da in enumerate(choice):
        if not sys.has(da):
            raise InvalidChoiceError(f"unknown DA {da!r}")
        if sys.component_of(da) != pos:
            raise InvalidChoiceError(f"DA {da!r} does not belong to component {sys.names[pos]}")
    w = sys.l
    for i in range(len(choice)):
        for j in range(i + 1, len(choice)):
            w = min(w, sys.compatibility(choice[i], choice[j]))
    n = CountVector.tally((sys.priority(d) for d in choice), sys.k)
    return QualityVector(CompatibilityValue(w, sys.l), n)


def admissible_composites(sys: MorphSystem) -> Iterator[CompositeSolution]:
    """Every composite with all pairwise compatibilities >= 1.

    Depth-first in component order, pruning a branch as soon as a chosen pair
    is incompatible.
    """
    if sys.size > MAX_PRODUCT:
        raise TooLargeError(f"{sys.size} composites exceeds {MAX_PRODUCT}")
    comps = sys.components
    chosen: list[str] = []

    def rec(ci: int):
        if ci == len(comps):
            yield CompositeSolution(tuple(chosen), evaluate_composite(sys, chosen))
            return
        for da in comps[ci].alternatives:
            if all(sys.compatibility(prev, da.id) >= 1 for prev in chosen):
                chosen.append(da.id)
                yield from rec(ci + 1)
                chosen.pop()

    yield from rec(0)


def composite_order(c: CompositeSolution):
    return ids_key(c.choice), c.choice


def hmmd_synthesize(sys: MorphSystem) -> tuple[CompositeSolution, ...]:
    """Pareto-efficient admissible composites, in component-wise id order."""
    pool = list(admissible_composites(sys))
    if not pool:
        raise InfeasibleError("no composite has all pairwise compatibilities nonzero")
    front = pareto_front([(c.choice, c.quality) for c in pool])
    return tuple(sorted((c for c in pool if c.choice in front), key=lambda c: c.choice))
