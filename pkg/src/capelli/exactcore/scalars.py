"""Exact scalar domains: rationals (``fractions.Fraction``) and Gaussian rationals."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction

__all__ = ["Rational", "GaussRational", "as_rational", "is_exact_scalar", "I"]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a canonical Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussRational)) and not isinstance(x, bool)


class GaussRational:
    """Element ``re + im*i`` of Q(i).

    Instances are immutable and hash equal to the corresponding rational when
    the imaginary part vanishes, so they mix freely with ``int`` and
    ``Fraction`` inside polynomial coefficient dictionaries.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x, 0)
        return NotImplemented

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussRational(self.re * other, self.im * other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        num = self * o.conjugate()
        return GaussRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussRational(1) / (self ** (-k))
        out, base = GaussRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = GaussRational(0, 1)


def conj(x):
    """Complex conjugate for any exact scalar (identity on rationals)."""
    if isinstance(x, GaussRational):
        return x.conjugate()
    return x


def real_part(x) -> Fraction:
    if isinstance(x, GaussRational):
        return x.re
    return as_rational(x)


def simplify_scalar(x):
    """Demote a real GaussRational to Fraction/int so coefficient types stay lean."""
    if isinstance(x, GaussRational) and x.im == 0:
        x = x.re
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x
