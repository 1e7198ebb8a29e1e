"""Exact scalars: Gaussian rationals re + im*i.

Every coefficient in the engine is one of these; no floats are ever
introduced, so equality of two expansions is literal equality of dicts.

Internally a value is stored as an integer triple (a, b, d) meaning
(a + b*i)/d with d > 0 and gcd(a, b, d) = 1, so the representation is
unique and arithmetic stays in plain int operations with a single gcd
per result.  This class sits at the bottom of every series product;
routing components through Fraction dunders costs several gcd
normalizations per multiply and dominates profile time.

Example:

    >>> (GaussScalar(1, 2) * GaussScalar(0, 1)).as_str()
    '(-2+i)'
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as _gcd

__all__ = ["GaussScalar", "ZERO", "ONE", "I", "scalar"]


class GaussScalar:
    """Immutable Gaussian rational.  Do not mutate the slots."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if type(re) is int and type(im) is int:
            self._a = re
            self._b = im
            self._d = 1
            return
        if not isinstance(re, Fraction):
            re = Fraction(re)
        if not isinstance(im, Fraction):
            im = Fraction(im)
        rd = re.denominator
        md = im.denominator
        a = re.numerator * md
        b = im.numerator * rd
        d = rd * md
        if d != 1:
            g = _gcd(a, b, d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        self._a = a
        self._b = b
        self._d = d

    # ---- components ----

    @property
    def re(self):
        return Fraction(self._a, self._d)

    @property
    def im(self):
        return Fraction(self._b, self._d)

    # ---- predicates ----

    def is_zero(self):
        return not (self._a or self._b)

    def is_one(self):
        return self._a == 1 and not self._b and self._d == 1

    def is_real(self):
        return not self._b

    # ---- arithmetic ----

    def __add__(self, other):
        if type(other) is not GaussScalar:
            other = _coerce(other)
        d1 = self._d
        d2 = other._d
        if d1 == d2 == 1:
            return _raw(self._a + other._a, self._b + other._b, 1)
        a = self._a * d2 + other._a * d1
        b = self._b * d2 + other._b * d1
        d = d1 * d2
        g = _gcd(a, b, d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        return _raw(a, b, d)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussScalar:
            other = _coerce(other)
        d1 = self._d
        d2 = other._d
        if d1 == d2 == 1:
            return _raw(self._a - other._a, self._b - other._b, 1)
        a = self._a * d2 - other._a * d1
        b = self._b * d2 - other._b * d1
        d = d1 * d2
        g = _gcd(a, b, d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        return _raw(a, b, d)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return _raw(-self._a, -self._b, self._d)

    def __mul__(self, other):
        if type(other) is not GaussScalar:
            other = _coerce(other)
        a1 = self._a
        b1 = self._b
        a2 = other._a
        b2 = other._b
        a = a1 * a2 - b1 * b2
        b = a1 * b2 + b1 * a2
        d = self._d * other._d
        if d != 1:
            g = _gcd(a, b, d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        return _raw(a, b, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other) is not GaussScalar:
            other = _coerce(other)
        a2 = other._a
        b2 = other._b
        n = a2 * a2 + b2 * b2
        if not n:
            raise ZeroDivisionError("division by zero GaussScalar")
        a1 = self._a
        b1 = self._b
        d2 = other._d
        a = (a1 * a2 + b1 * b2) * d2
        b = (b1 * a2 - a1 * b2) * d2
        d = self._d * n
        g = _gcd(a, b, d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        return _raw(a, b, d)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def conjugate(self):
        return _raw(self._a, -self._b, self._d)

    # ---- comparison / hashing ----

    def __eq__(self, other):
        if type(other) is GaussScalar:
            return (
                self._a == other._a
                and self._b == other._b
                and self._d == other._d
            )
        if isinstance(other, int):
            return not self._b and self._d == 1 and self._a == other
        if isinstance(other, Fraction):
            # both sides canonical, so componentwise compare is exact
            return (
                not self._b
                and self._a == other.numerator
                and self._d == other.denominator
            )
        return NotImplemented

    def __hash__(self):
        return hash((self._a, self._b, self._d))

    # ---- printing ----

    def as_str(self):
        """Canonical text form: rationals as num/den, the imaginary unit as i.

        Pure values print bare ("3/2", "-i", "2*i"); mixed values are
        parenthesized ("(1+i)") so they drop into products unambiguously.
        """
        if self.is_zero():
            return "0"
        if not self._b:
            return str(self.re)
        if not self._a:
            return _im_str(self.im)
        sign = "+" if self._b > 0 else "-"
        im = _im_str(abs(self.im))
        return "(%s%s%s)" % (self.re, sign, im)

    def __repr__(self):
        return "GaussScalar(%r, %r)" % (str(self.re), str(self.im))

    def __str__(self):
        return self.as_str()


def _raw(a, b, d):
    # trusted normalized triple; bypasses __init__ dispatch
    s = _new(GaussScalar)
    s._a = a
    s._b = b
    s._d = d
    return s


_new = GaussScalar.__new__


def _im_str(im):
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return "%s*i" % im


def _coerce(v):
    if isinstance(v, GaussScalar):
        return v
    if isinstance(v, int):
        return _raw(v, 0, 1)
    if isinstance(v, Fraction):
        return _raw(v.numerator, 0, v.denominator)
    raise TypeError("cannot coerce %r to GaussScalar" % (v,))


def scalar(re=0, im=0):
    """Shorthand constructor accepting ints, Fractions or 'p/q' strings."""
    if isinstance(re, str):
        re = Fraction(re)
    if isinstance(im, str):
        im = Fraction(im)
    return GaussScalar(re, im)


ZERO = GaussScalar(0)
ONE = GaussScalar(1)
I = GaussScalar(0, 1)
