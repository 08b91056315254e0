"""Maximum-profit assignment of n elements to n positions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import InvalidInstanceError
from ..money import ZERO, Money


@dataclass(frozen=True)
class AssignmentInstance:
    profit: tuple[tuple[Money, ...], ...]  # profit[i][p], 0-based

    def __post_init__(self):
        rows = tuple(tuple(Money.of(v) for v in row) for row in self.profit)
        object.__setattr__(self, "profit", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise InvalidInstanceError("assignment profit matrix must be square")

    @property
    def n(self) -> int:
        return len(self.profit)

    def value(self, s: Sequence[int]) -> Money:
        """Total profit of a 1-based position vector."""
        return sum((self.profit[i][p - 1] for i, p in enumerate(s)), ZERO)


@dataclass(frozen=True)
class Permutation:
    s: tuple[int, ...]  # s[i] = 1-based position of element i+1

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(int(p) for p in self.s))
        if sorted(self.s) != list(range(1, len(self.s) + 1)):
            raise InvalidInstanceError(f"not a permutation of 1..{len(self.s)}: {self.s}")


def _best(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    return int(matrix[rows, cols].sum())


def solve_assignment(inst: AssignmentInstance) -> Permutation:
    """Profit-maximal permutation; the lexicographically smallest among optima.

    scipy gives the optimal value. Positions are then fixed element by
    element, smallest first, keeping a position only if the rest can still
    reach the optimum.
    """
    n = inst.n
    m = np.array([[c.tenths for c in row] for row in inst.profit], dtype=np.int64).reshape(n, n)
    target = _best(m)
    free_cols = list(range(n))
    s = []
    acc = 0
    for i in range(n):
        for p in free_cols:
            rest_cols = [c for c in free_cols if c != p]
            sub = m[np.ix_(range(i + 1, n), rest_cols)]
            if acc + int(m[i, p]) + _best(sub) == target:
                s.append(p + 1)
                acc += int(m[i, p])
                free_cols = rest_cols
                break
    return Permutation(tuple(s))
