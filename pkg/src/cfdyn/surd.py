"""Exact arithmetic in real quadratic fields.

A :class:`QuadraticSurd` stores the value ``(p + q*sqrt(d))/r`` with integer
``p, q, r`` and square-free ``d``.  All field operations, comparisons and
integer floors are exact.  Operations that stay inside one field Q(sqrt d)
return surds (rational results collapse to :class:`fractions.Fraction`);
mixing two distinct irrational fields promotes to
:class:`cfdyn.adaptive.AdaptiveReal`.
"""

from __future__ import annotations

import math
from fractions import Fraction

from sympy import factorint

_SQUAREFREE_CACHE: dict[int, tuple[int, int]] = {}


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, f) with n = s**2 * f and f square-free (n >= 0)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return 1, n
    hit = _SQUAREFREE_CACHE.get(n)
    if hit is None:
        s, f = 1, 1
        for prime, exp in factorint(n).items():
            s *= prime ** (exp // 2)
            if exp % 2:
                f *= prime
        hit = (s, f)
        _SQUAREFREE_CACHE[n] = hit
    return hit


def _sign_pair(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for square-free d >= 2."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs, rhs = a * a, b * b * d
    # a, b of opposite signs: |a| vs |b|*sqrt(d); equality would force
    # sqrt(d) rational, impossible for square-free d >= 2.
    if a > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


class QuadraticSurd:
    """Canonical (p + q*sqrt(d))/r with gcd(p, q, r) = 1, r > 0."""

    __slots__ = ("p", "q", "d", "r")

    def __init__(self, p: int, q: int, d: int, r: int = 1):
        if r == 0:
            raise ZeroDivisionError("surd denominator r = 0")
        if d < 0:
            raise ValueError("negative discriminant")
        if q != 0 and d >= 2:
            s, f = squarefree_decompose(d)
            q, d = q * s, f
        if d < 2:
            p, q, d = p + q * d, 0, 0  # sqrt(0)=0, sqrt(1)=1
        if q == 0:
            d = 0
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p, self.q, self.d, self.r = p, q, d, r

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "QuadraticSurd":
        f = Fraction(value)
        return cls(f.numerator, 0, 0, f.denominator)

    @classmethod
    def sqrt(cls, n: int) -> "QuadraticSurd | Fraction":
        return _wrap(cls(0, 1, n, 1))

    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    # -- exact queries --------------------------------------------------------

    def sign(self) -> int:
        if self.q == 0:
            return (self.p > 0) - (self.p < 0)
        return _sign_pair(self.p, self.q, self.d)

    def interval(self, bits: int) -> tuple[int, int]:
        """Integer bounds (lo, hi) with lo/2^bits <= value <= hi/2^bits."""
        if self.q == 0:
            num = self.p << bits
            lo = num // self.r
            hi = -((-num) // self.r)
            return lo, hi
        s = math.isqrt(self.d << (2 * bits))
        root_lo, root_hi = s, s + 1  # s <= sqrt(d)*2^bits < s+1
        if self.q > 0:
            qlo, qhi = self.q * root_lo, self.q * root_hi
        else:
            qlo, qhi = self.q * root_hi, self.q * root_lo
        base = self.p << bits
        lo = (base + qlo) // self.r
        hi = -((-(base + qhi)) // self.r)
        return lo, hi

    def __floor__(self) -> int:
        if self.q == 0:
            return self.p // self.r
        bits = 32
        while True:
            lo, hi = self.interval(bits)
            flo, fhi = lo >> bits, hi >> bits
            if flo == fhi:
                return flo
            bits *= 2  # irrational: interval eventually avoids integers

    def __float__(self) -> float:
        lo, hi = self.interval(64)
        return (lo + hi) / 2.0 / (1 << 64)

    # -- arithmetic -----------------------------------------------------------

    def _compatible(self, other):
        """Coerce other into this surd's field, or return None."""
        if isinstance(other, QuadraticSurd):
            if other.q == 0 or self.q == 0 or other.d == self.d:
                return other
            return None
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.from_rational(other)
        return None

    def _field_d(self, other: "QuadraticSurd") -> int:
        return self.d if self.q != 0 else other.d

    def __add__(self, other):
        o = self._compatible(other)
        if o is None:
            return self._promote_binary(other, "add")
        d = self._field_d(o)
        return _wrap(QuadraticSurd(
            self.p * o.r + o.p * self.r,
            self.q * o.r + o.q * self.r,
            d, self.r * o.r))

    __radd__ = __add__

    def __neg__(self):
        return _wrap(QuadraticSurd(-self.p, -self.q, self.d, self.r))

    def __sub__(self, other):
        o = self._compatible(other)
        if o is None:
            return self._promote_binary(other, "sub")
        return self.__add__(-o)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._compatible(other)
        if o is None:
            return self._promote_binary(other, "mul")
        d = self._field_d(o)
        return _wrap(QuadraticSurd(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            d, self.r * o.r))

    __rmul__ = __mul__

    def inverse(self):
        norm = self.p * self.p - self.q * self.q * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        return _wrap(QuadraticSurd(self.r * self.p, -self.r * self.q,
                                   self.d, norm))

    def __truediv__(self, other):
        o = self._compatible(other)
        if o is None:
            return self._promote_binary(other, "div")
        return self.__mul__(o.inverse())

    def __rtruediv__(self, other):
        o = self._compatible(other)
        if o is None:
            return self._promote_binary(other, "rdiv")
        return o.__mul__(self.inverse())

    def __abs__(self):
        return -self if self.sign() < 0 else _wrap(self)

    def _promote_binary(self, other, op: str):
        from .adaptive import AdaptiveReal

        a = AdaptiveReal.from_surd(self)
        if op == "add":
            return a + other
        if op == "sub":
            return a - other
        if op == "mul":
            return a * other
        if op == "div":
            return a / other
        if op == "rdiv":
            return other / a
        raise AssertionError(op)

    # -- comparisons ----------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            other = QuadraticSurd.from_rational(other)
        if isinstance(other, QuadraticSurd):
            if self.q == 0 or other.q == 0 or self.d == other.d:
                diff = QuadraticSurd(
                    self.p * other.r - other.p * self.r,
                    self.q * other.r - other.q * self.r,
                    self._field_d(other), self.r * other.r)
                return diff.sign()
            return self._cmp_cross(other)
        return NotImplemented

    def _cmp_cross(self, other: "QuadraticSurd") -> int:
        # distinct square-free fields share only rationals, and both sides
        # here are irrational, so the values differ: refinement terminates
        bits = 32
        while True:
            alo, ahi = self.interval(bits)
            blo, bhi = other.interval(bits)
            if ahi < blo:
                return -1
            if bhi < alo:
                return 1
            bits *= 2

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.p, self.q, self.d, self.r) == (other.p, other.q, other.d, other.r)
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and Fraction(self.p, self.r) == Fraction(other)
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.d, self.r))

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __repr__(self):
        return f"({self.p}{self.q:+d}*sqrt({self.d}))/{self.r}"


def _wrap(s: QuadraticSurd):
    """Collapse rational surds to Fraction so ExactReal tags stay canonical."""
    if s.q == 0:
        return Fraction(s.p, s.r)
    return s


def surd(p: int, q: int, d: int, r: int = 1):
    """Build (p + q*sqrt(d))/r, collapsing to Fraction when rational."""
    return _wrap(QuadraticSurd(p, q, d, r))


def surd_floor(x: QuadraticSurd | Fraction | int) -> int:
    """Exact floor of a quadratic surd (rationals accepted)."""
    if isinstance(x, QuadraticSurd):
        return math.floor(x)
    return math.floor(Fraction(x))


GOLDEN_G = QuadraticSurd(-1, 1, 5, 2)        # (sqrt(5)-1)/2
INV_SQRT2 = QuadraticSurd(0, 1, 2, 2)        # sqrt(2)/2
