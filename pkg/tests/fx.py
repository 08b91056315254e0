"""Fixture loading shared by the test modules."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import restruct
from restruct.io import load_document

FIXTURES = Path(restruct.__file__).parent / "fixtures"
NAMES = sorted(p.stem for p in FIXTURES.glob("*.json"))


def path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


@lru_cache(maxsize=None)
def doc(name: str):
    return load_document(path(name))
