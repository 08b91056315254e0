"""Exact one-decimal fixed-point amounts.

Profits, weights, capacities and change costs in the course and sensor data
all carry one fractional digit. Storing integer tenths keeps feasibility
checks such as ``13.8 <= 14`` free of float rounding.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import InputError

MoneyLike = Union["Money", int, str, Decimal]


@total_ordering
class Money:
    __slots__ = ("tenths",)

    def __init__(self, tenths: int = 0):
        if not isinstance(tenths, int) or isinstance(tenths, bool):
            raise TypeError("Money is constructed from integer tenths; use Money.of()")
        self.tenths = tenths

    @classmethod
    def of(cls, value: MoneyLike) -> "Money":
        """Parse ``"13.8"``, ``14``, ``Decimal("0.5")`` or pass a Money through."""
        if isinstance(value, Money):
            return value
        if isinstance(value, bool):
            raise InputError(f"not a money value: {value!r}")
        if isinstance(value, int):
            return cls(value * 10)
        if isinstance(value, float):
            # floats are accepted only when they are exact at one decimal
            value = Decimal(repr(value))
        try:
            dec = Decimal(value) if not isinstance(value, Decimal) else value
        except (InvalidOperation, TypeError, ValueError):
            raise InputError(f"not a money value: {value!r}") from None
        if not dec.is_finite():
            raise InputError(f"not a money value: {value!r}")
        scaled = dec * 10
        if scaled != scaled.to_integral_value():
            raise InputError(f"money values carry at most one decimal digit: {value!r}")
        return cls(int(scaled))

    def __add__(self, other):
        if isinstance(other, Money):
            return Money(self.tenths + other.tenths)
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Money):
            return Money(self.tenths - other.tenths)
        return NotImplemented

    def __neg__(self):
        return Money(-self.tenths)

    def __abs__(self):
        return Money(abs(self.tenths))

    def __mul__(self, k):
        if isinstance(k, int) and not isinstance(k, bool):
            return Money(self.tenths * k)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Money):
            return self.tenths == other.tenths
        if isinstance(other, int) and not isinstance(other, bool):
            return self.tenths == other * 10
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Money):
            return self.tenths < other.tenths
        if isinstance(other, int) and not isinstance(other, bool):
            return self.tenths < other * 10
        return NotImplemented

    def __hash__(self):
        # consistent with int equality above
        return hash(Fraction(self.tenths, 10))

    def __bool__(self):
        return self.tenths != 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.tenths, 10)

    def __str__(self):
        sign = "-" if self.tenths < 0 else ""
        q, r = divmod(abs(self.tenths), 10)
        return f"{sign}{q}.{r}"

    def __repr__(self):
        return f"Money('{self}')"


ZERO = Money(0)


def total(values) -> Money:
    return sum(values, ZERO)


def as_number(x) -> Fraction:
    """Common numeric view of Money / int / Fraction used for scalarisation."""
    if isinstance(x, Money):
        return x.to_fraction()
    return Fraction(x)
