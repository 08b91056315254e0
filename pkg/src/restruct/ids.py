"""Deterministic ordering for element ids.

Fixtures mix integer ids (course items, users) with string ids (DAs, Steiner
vertices). Ints sort numerically and before strings; tuples sort elementwise.
"""

from __future__ import annotations

from typing import Iterable


def id_key(x):
    if isinstance(x, tuple):
        return (2, tuple(id_key(v) for v in x))
    if isinstance(x, bool) or not isinstance(x, int):
        return (1, str(x))
    return (0, x)


def sorted_ids(ids: Iterable) -> list:
    return sorted(ids, key=id_key)


def ids_key(ids: Iterable) -> list:
    """Tie-break key: the sorted id sequence, compared lexicographically."""
    return [id_key(i) for i in sorted_ids(ids)]
