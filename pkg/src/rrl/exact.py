"""Exact comparisons against thresholds that involve fractional powers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def to_fraction(x) -> Fraction:
    """Decimal-faithful conversion: ``0.1`` becomes ``1/10``, not the binary double."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


def float_up(q: Fraction) -> float:
    """Smallest double ``f`` with both ``f >= q`` and ``to_fraction(f) >= q``."""
    f = float(q)
    while Fraction(f) < q or to_fraction(f) < q:
        f = math.nextafter(f, math.inf)
    return f


def float_down(q: Fraction) -> float:
    """Largest double ``f`` with both ``f <= q`` and ``to_fraction(f) <= q``."""
    f = float(q)
    while Fraction(f) > q or to_fraction(f) > q:
        f = math.nextafter(f, -math.inf)
    return f


@dataclass(frozen=True)
class Power:
    """The nonnegative real ``base ** (p / q)``; ``base=None`` stands for infinity."""

    base: Fraction | None
    p: int = 1
    q: int = 1

    @classmethod
    def of(cls, x) -> "Power":
        if isinstance(x, Power):
            return x
        if x is None or (isinstance(x, float) and math.isinf(x)):
            return cls(None)
        x = to_fraction(x)
        if x < 0:
            raise ValueError("thresholds must be nonnegative")
        return cls(x)

    @property
    def infinite(self) -> bool:
        return self.base is None

    def pow(self, n: int) -> "Power":
        return self if self.infinite else Power(self.base, self.p * n, self.q)

    def le(self, x) -> bool:
        """``self <= x`` for a nonnegative rational ``x``."""
        if self.infinite:
            return False
        return self.base ** self.p <= Fraction(x) ** self.q

    def ge(self, x) -> bool:
        """``self >= x`` for a nonnegative rational ``x``."""
        if self.infinite:
            return True
        return self.base ** self.p >= Fraction(x) ** self.q

    def __float__(self) -> float:
        return math.inf if self.infinite else float(self.base) ** (self.p / self.q)
