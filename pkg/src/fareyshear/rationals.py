"""Exact vertices of the Farey tessellation: reduced fractions plus a point at infinity.

Vertices live on the circle, so infinity is a single ordinary point (1/0) and
linear comparisons involving it are refused; use the cyclic order predicate
instead.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, inf


class ExtendedRational:
    """Reduced fraction num/den with den >= 0; den == 0 encodes infinity as 1/0."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if isinstance(num, ExtendedRational):
            num, den = num.num, num.den * den if den != 1 else num.den
        if isinstance(num, Fraction):
            num, den = num.numerator, num.denominator * den
        if den == 0:
            if num == 0:
                raise ZeroDivisionError("0/0 is not a point of the extended line")
            num = 1
        else:
            if den < 0:
                num, den = -num, -den
            g = gcd(num, den)
            num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("ExtendedRational is immutable")

    @property
    def is_infinity(self):
        return self.den == 0

    def as_fraction(self):
        if self.den == 0:
            raise ValueError("infinity has no finite fraction value")
        return Fraction(self.num, self.den)

    def __float__(self):
        return inf if self.den == 0 else self.num / self.den

    def proj(self):
        """Projective pair (num, den) with exact integer entries."""
        return (self.num, self.den)

    @property
    def key(self):
        """Canonical text form: 'p/q', with infinity written '1/0'."""
        return f"{self.num}/{self.den}"

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return cls(int(p), int(q))
        return cls(int(text))

    def sort_key(self):
        """Orders finite values by size with infinity last; for canonical listings only."""
        if self.den == 0:
            return (1, Fraction(0))
        return (0, Fraction(self.num, self.den))

    def __eq__(self, other):
        if isinstance(other, ExtendedRational):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den != 0 and self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self.den == 0:
            return hash(("er-inf",))
        return hash(Fraction(self.num, self.den))

    def _cmp_value(self):
        if self.den == 0:
            raise TypeError(
                "infinity is not linearly ordered; use cyclic_orient for circular order"
            )
        return Fraction(self.num, self.den)

    def __lt__(self, other):
        return self._cmp_value() < ExtendedRational(other)._cmp_value()

    def __le__(self, other):
        return self._cmp_value() <= ExtendedRational(other)._cmp_value()

    def __gt__(self, other):
        return self._cmp_value() > ExtendedRational(other)._cmp_value()

    def __ge__(self, other):
        return self._cmp_value() >= ExtendedRational(other)._cmp_value()

    def __neg__(self):
        if self.den == 0:
            return self
        return ExtendedRational(-self.num, self.den)

    def __repr__(self):
        return f"ER({self.key})"


INFINITY = ExtendedRational(1, 0)


def ER(num, den=1):
    """Shorthand constructor."""
    return ExtendedRational(num, den)


def proj_diff(u, v):
    """Determinant u.num*v.den - v.num*u.den; the projective analogue of u - v.

    Works on anything exposing .proj() or on raw (num, den) pairs.
    """
    un, ud = u.proj() if hasattr(u, "proj") else u
    vn, vd = v.proj() if hasattr(v, "proj") else v
    return un * vd - vn * ud


def cyclic_orient(x, y, z):
    """Sign of the cyclic order of three distinct circle points.

    +1 when (x, y, z) is positively oriented (for finite values: x < y < z up
    to rotation), -1 for the reverse, 0 when two points coincide.
    """
    d1 = proj_diff(x, y)
    d2 = proj_diff(y, z)
    d3 = proj_diff(z, x)
    p = d1 * d2 * d3
    return (p > 0) - (p < 0)


def in_arc(x, a, b):
    """True when x lies strictly inside the arc from a to b (positive direction)."""
    return cyclic_orient(a, x, b) > 0
