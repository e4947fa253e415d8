"""Exact arithmetic in Q(i), backed by gmpy2 rationals."""

from __future__ import annotations

import re
from fractions import Fraction

from gmpy2 import mpq

__all__ = ["GaussianRational", "as_gaussian", "ZERO", "ONE", "I"]

_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def _to_mpq(value) -> mpq:
    if isinstance(value, str):
        m = _RAT.match(value)
        if m is None:
            raise ValueError(f"not a rational literal: {value!r}")
        num, den = m.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den) if den else 1)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return mpq(value)


def format_rational(q) -> str:
    """Canonical 'p/q' text (just 'p' when the denominator is 1)."""
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """An element re + im*i of Q(i).

    gmpy2 keeps both parts in lowest terms with a positive denominator, so
    structural equality of (re, im) is value equality.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> GaussianRational:
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = as_gaussian(other)
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gaussian(other)
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gaussian(other) - self

    def __mul__(self, other):
        other = as_gaussian(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * as_gaussian(other).inverse()

    def __rtruediv__(self, other):
        return as_gaussian(other) * self.inverse()

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        try:
            other = as_gaussian(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    # -- text ------------------------------------------------------------

    def to_parts(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_parts(cls, doc) -> GaussianRational:
        return cls(doc.get("re", "0"), doc.get("im", "0"))

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        im = format_rational(self.im)
        if self.re == 0:
            return f"{im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}*i"

    def __repr__(self):
        return f"GaussianRational({format_rational(self.re)!r}, {format_rational(self.im)!r})"


def as_gaussian(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, complex):
        raise TypeError("complex floats are not exact")
    if isinstance(value, (int, Fraction, str)) or type(value).__name__ == "mpq":
        return GaussianRational(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
