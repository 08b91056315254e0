"""Grouped selection of change operations under a budget.

Most restructuring problems reduce to the same shape: pick at most one
option from each group (an element, a component, a cluster member), pay the
summed change cost within the budget, keep a capacity load in bounds, and
maximise the summed objective gain. This module solves that shape exactly by
depth-first search with an optimistic bound, returning the best ``top`` plans
under :func:`plan_key`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from ..errors import TooLargeError
from .model import ChangeOp, plan_key

MAX_OPTIONS = 64


@dataclass(frozen=True)
class Option:
    op: ChangeOp
    gain: int  # objective change, integer units (tenths for money)
    cost: int  # change cost, same units as the budget
    load: int = 0  # capacity usage change
    group: Hashable = None


def select(
    options: Sequence[Option],
    budget: int,
    *,
    room: int | None = None,
    base_load: int = 0,
    required: frozenset = frozenset(),
    strict: bool = False,
    valid: Callable[[tuple[Option, ...]], bool] | None = None,
    top: int = 1,
) -> list[tuple[int, tuple[Option, ...]]]:
    """Best selections as ``(gain, options)``, best first.

    ``required`` names groups that must contribute an option (for example an
    element that no longer exists at the goal stage). With ``strict`` the
    total cost must stay below the budget instead of at or below it.
    """
    if len(options) > MAX_OPTIONS:
        raise TooLargeError(f"{len(options)} change options exceeds {MAX_OPTIONS}")
    groups: dict = {}
    for idx, o in enumerate(options):
        g = o.group if o.group is not None else ("#", idx)
        groups.setdefault(g, []).append(o)
    order = list(groups)
    must = [g in required for g in order]

    # suffix bounds: best gain and lowest load still obtainable
    n = len(order)
    gain_ub = [0] * (n + 1)
    load_lb = [0] * (n + 1)
    for gi in range(n - 1, -1, -1):
        opts = groups[order[gi]]
        best = max(o.gain for o in opts)
        low = min(o.load for o in opts)
        gain_ub[gi] = gain_ub[gi + 1] + (best if must[gi] else max(0, best))
        load_lb[gi] = load_lb[gi + 1] + (low if must[gi] else min(0, low))

    def fits(cost: int) -> bool:
        return cost < budget if strict else cost <= budget

    kept: list[tuple[tuple, int, tuple[Option, ...]]] = []
    chosen: list[Option] = []

    def consider(gain: int, cost: int):
        sel = tuple(chosen)
        if valid is not None and not valid(sel):
            return
        key = plan_key(gain, [o.op for o in sel], cost)
        kept.append((key, gain, sel))
        kept.sort(key=lambda t: t[0])
        del kept[top:]

    def dfs(gi: int, gain: int, cost: int, load: int):
        if not fits(cost):
            return
        if room is not None and base_load + load + load_lb[gi] > room:
            return
        if len(kept) >= top and gain + gain_ub[gi] < kept[-1][1]:
            return
        if gi == n:
            if room is None or base_load + load <= room:
                consider(gain, cost)
            return
        for o in groups[order[gi]]:
            chosen.append(o)
            dfs(gi + 1, gain + o.gain, cost + o.cost, load + o.load)
            chosen.pop()
        if not must[gi]:
            dfs(gi + 1, gain, cost, load)

    dfs(0, 0, 0, 0)
    return [(gain, sel) for _, gain, sel in kept]
