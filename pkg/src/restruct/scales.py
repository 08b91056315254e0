"""Ordinal quality scales and the poset of composite-system excellence.

A composite built from ``m`` components is rated by ``N(S) = (w; n)`` where
``w`` is the weakest pairwise compatibility among the chosen alternatives
(scale ``0..l``, higher is better) and ``n = (n_1, ..., n_k)`` counts how many
chosen alternatives sit at each priority level (level 1 is best).

Count vectors are compared by prefix sums: ``a`` is at least as good as ``b``
when, for every ``j``, at least as many of ``a``'s elements are at level
``<= j``. This reproduces the Hasse diagram of the three-level, three-element
scale, including the incomparability of ``<2,0,1>`` and ``<1,2,0>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import accumulate
from typing import Hashable, Iterable, Sequence, TypeVar

from .errors import EmptyInputError, InputError, ScaleMismatchError

K = TypeVar("K", bound=Hashable)


class Dominance(enum.Enum):
    EQUAL = "equal"
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated-by"
    INCOMPARABLE = "incomparable"

    def flip(self) -> "Dominance":
        if self is Dominance.DOMINATES:
            return Dominance.DOMINATED_BY
        if self is Dominance.DOMINATED_BY:
            return Dominance.DOMINATES
        return self


@dataclass(frozen=True)
class OrdinalValue:
    level: int
    k: int

    def __post_init__(self):
        if self.k < 1 or not 1 <= self.level <= self.k:
            raise InputError(f"ordinal level {self.level} outside [1..{self.k}]")


@dataclass(frozen=True)
class CompatibilityValue:
    w: int
    l: int = 3

    def __post_init__(self):
        if self.l < 0 or not 0 <= self.w <= self.l:
            raise InputError(f"compatibility {self.w} outside [0..{self.l}]")


@dataclass(frozen=True)
class CountVector:
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts:
            raise InputError("count vector needs at least one level")
        if any(c < 0 for c in self.counts):
            raise InputError(f"negative count in {self.counts}")

    @classmethod
    def tally(cls, levels: Iterable[int], k: int) -> "CountVector":
        counts = [0] * k
        for r in levels:
            if not 1 <= r <= k:
                raise InputError(f"priority {r} outside [1..{k}]")
            counts[r - 1] += 1
        return cls(tuple(counts))

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def deficiency(self) -> int:
        """Total number of one-level improvements separating this from all-best."""
        return sum(r * c for r, c in enumerate(self.counts))

    def __str__(self):
        return ",".join(map(str, self.counts))


@dataclass(frozen=True)
class QualityVector:
    w: CompatibilityValue
    n: CountVector

    @classmethod
    def of(cls, w: int, *counts: int, l: int = 3) -> "QualityVector":
        return cls(CompatibilityValue(w, l), CountVector(counts))

    def __str__(self):
        return f"({self.w.w};{self.n})"


def _check_counts(a: CountVector, b: CountVector) -> None:
    if a.k != b.k:
        raise ScaleMismatchError(f"count vectors on different scales: k={a.k} vs k={b.k}")
    if a.total != b.total:
        raise ScaleMismatchError(f"count vectors with different totals: {a.total} vs {b.total}")


def _combine(ge: bool, le: bool) -> Dominance:
    if ge and le:
        return Dominance.EQUAL
    if ge:
        return Dominance.DOMINATES
    if le:
        return Dominance.DOMINATED_BY
    return Dominance.INCOMPARABLE


def dominates_counts(a: CountVector, b: CountVector) -> Dominance:
    _check_counts(a, b)
    pa = list(accumulate(a.counts))
    pb = list(accumulate(b.counts))
    ge = all(x >= y for x, y in zip(pa, pb))
    le = all(x <= y for x, y in zip(pa, pb))
    return _combine(ge, le)


def dominates_quality(a: QualityVector, b: QualityVector) -> Dominance:
    if a.w.l != b.w.l:
        raise ScaleMismatchError(f"compatibility scales differ: l={a.w.l} vs l={b.w.l}")
    by_n = dominates_counts(a.n, b.n)
    ge = a.w.w >= b.w.w and by_n in (Dominance.EQUAL, Dominance.DOMINATES)
    le = a.w.w <= b.w.w and by_n in (Dominance.EQUAL, Dominance.DOMINATED_BY)
    return _combine(ge, le)


def dominates_min(a: Sequence, b: Sequence) -> Dominance:
    """Componentwise comparison of cost vectors where smaller is better."""
    if len(a) != len(b):
        raise ScaleMismatchError(f"vectors of length {len(a)} and {len(b)}")
    ge = all(x <= y for x, y in zip(a, b))
    le = all(x >= y for x, y in zip(a, b))
    return _combine(ge, le)


def pareto_front(items: Sequence[tuple[K, QualityVector]]) -> set[K]:
    """Ids whose quality vector is dominated by no other item.

    Equal vectors do not dominate each other, so duplicates are all kept.
    """
    if not items:
        raise EmptyInputError("pareto_front needs at least one item")
    # Sort best-first by a linear extension of the order; a dominated item can
    # then only be dominated by something already scanned.
    ordered = sorted(items, key=lambda kv: (-kv[1].w.w, kv[1].n.deficiency()))
    front: list[tuple[K, QualityVector]] = []
    for key, q in ordered:
        if not any(dominates_quality(fq, q) is Dominance.DOMINATES for _, fq in front):
            front.append((key, q))
    return {key for key, _ in front}


def pareto_front_min(items: Sequence[tuple[K, Sequence]]) -> list[K]:
    """Nondominated ids for minimisation vectors, in input order."""
    if not items:
        raise EmptyInputError("pareto_front_min needs at least one item")
    # lexicographic order is a linear extension of componentwise dominance
    order = sorted(range(len(items)), key=lambda i: tuple(items[i][1]))
    front: list[int] = []
    for i in order:
        v = items[i][1]
        if not any(dominates_min(items[j][1], v) is Dominance.DOMINATES for j in front):
            front.append(i)
    return [items[i][0] for i in sorted(front)]


def element_improvement_steps(n: CountVector, goal: CountVector) -> int:
    _check_counts(n, goal)
    return max(0, n.deficiency() - goal.deficiency())


def compat_improvement_steps(w: CompatibilityValue, goal: CompatibilityValue) -> int:
    if w.l != goal.l:
        raise ScaleMismatchError(f"compatibility scales differ: l={w.l} vs l={goal.l}")
    return max(0, goal.w - w.w)
