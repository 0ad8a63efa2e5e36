"""Adaptive-precision real numbers backed by dyadic interval arithmetic.

An :class:`AdaptiveReal` is a node in an expression DAG.  Evaluating a node
at ``bits`` of precision produces integer bounds ``(lo, hi)`` enclosing the
value at scale ``2**-bits``; refinements are intersected with earlier
enclosures, so decisions are never contradicted at higher precision.  Sign,
floor and comparison queries double the precision until they resolve or the
cap is reached, in which case :class:`cfdyn.errors.PrecisionError` is raised
rather than guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import config
from .errors import PrecisionError


class _Indeterminate(Exception):
    """Internal: interval too wide to evaluate (e.g. denominator spans 0)."""


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class AdaptiveReal:
    """Lazily refined real value; immutable once constructed."""

    __slots__ = ("_op", "_args", "_payload", "_bits", "_lo", "_hi")

    def __init__(self, op: str, args: tuple = (), payload=None):
        self._op = op
        self._args = args
        self._payload = payload
        self._bits = -1
        self._lo = 0
        self._hi = 0

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "AdaptiveReal":
        return cls("const", payload=Fraction(value))

    @classmethod
    def sqrt_int(cls, n: int) -> "AdaptiveReal":
        if n < 0:
            raise ValueError("negative radicand")
        return cls("sqrt", payload=n)

    @classmethod
    def from_surd(cls, s) -> "AdaptiveReal":
        root = cls.sqrt_int(s.d)
        return (cls.from_rational(Fraction(s.p)) + cls.from_rational(s.q) * root) \
            / cls.from_rational(s.r)

    @classmethod
    def ensure(cls, value) -> "AdaptiveReal":
        if isinstance(value, AdaptiveReal):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.from_rational(value)
        from .surd import QuadraticSurd

        if isinstance(value, QuadraticSurd):
            return cls.from_surd(value)
        raise TypeError(f"cannot adapt {type(value).__name__}")

    # -- evaluation -------------------------------------------------------------

    def _node_bounds(self, bits: int, child: list) -> tuple[int, int]:
        op = self._op
        if op == "const":
            v = self._payload
            num = v.numerator << bits
            return _floor_div(num, v.denominator), _ceil_div(num, v.denominator)
        if op == "sqrt":
            s = math.isqrt(self._payload << (2 * bits))
            hi = s if s * s == self._payload << (2 * bits) else s + 1
            return s, hi
        a_lo, a_hi = child[0]
        if op == "neg":
            return -a_hi, -a_lo
        b_lo, b_hi = child[1]
        if op == "add":
            return a_lo + b_lo, a_hi + b_hi
        if op == "sub":
            return a_lo - b_hi, a_hi - b_lo
        if op == "mul":
            prods = (a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi)
            return _floor_div(min(prods), 1 << bits), _ceil_div(max(prods), 1 << bits)
        if op == "div":
            if b_lo <= 0 <= b_hi:
                raise _Indeterminate("denominator interval spans zero")
            quots_lo = []
            quots_hi = []
            for num in (a_lo, a_hi):
                for den in (b_lo, b_hi):
                    quots_lo.append(_floor_div(num << bits, den))
                    quots_hi.append(_ceil_div(num << bits, den))
            return min(quots_lo), max(quots_hi)
        raise AssertionError(op)

    def refine(self, bits: int) -> tuple[int, int]:
        """Bounds (lo, hi) at scale 2**-bits; iterative, DAG-safe."""
        order: list[AdaptiveReal] = []
        seen: set[int] = set()
        stack: list[tuple[AdaptiveReal, bool]] = [(self, False)]
        while stack:  # iterative post-order (children before parents)
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for arg in node._args:
                stack.append((arg, False))
        for node in order:
            if node._bits >= bits:
                continue
            child = [a._scaled(bits) for a in node._args]
            lo, hi = node._node_bounds(bits, child)
            if node._bits >= 0:  # intersect with the earlier enclosure
                shift = bits - node._bits
                lo = max(lo, node._lo << shift)
                hi = min(hi, node._hi << shift)
            node._bits, node._lo, node._hi = bits, lo, hi
        return self._scaled(bits)

    def _scaled(self, bits: int) -> tuple[int, int]:
        shift = self._bits - bits
        if shift == 0:
            return self._lo, self._hi
        if shift < 0:
            raise AssertionError("child evaluated at lower precision")
        return self._lo >> shift, _ceil_div(self._hi, 1 << shift)

    # -- queries ----------------------------------------------------------------

    def _query(self, decide, what: str, cap: int | None = None):
        cap = config.PRECISION_CAP if cap is None else cap
        bits = max(config.START_BITS, self._bits)
        while True:
            try:
                lo, hi = self.refine(bits)
            except _Indeterminate:
                lo = hi = None
            if lo is not None:
                result = decide(lo, hi, bits)
                if result is not None:
                    return result
            if bits >= cap:
                raise PrecisionError(
                    f"{what} undecidable at precision cap {cap} bits")
            bits = min(2 * bits, cap)

    def sign(self, cap: int | None = None) -> int:
        def decide(lo, hi, bits):
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                return 0
            return None

        return self._query(decide, "sign", cap)

    def floor(self, cap: int | None = None) -> int:
        def decide(lo, hi, bits):
            flo, fhi = lo >> bits, hi >> bits
            return flo if flo == fhi else None

        return self._query(decide, "floor", cap)

    def __floor__(self) -> int:
        return self.floor()

    def cmp(self, other, cap: int | None = None) -> int:
        return (self - other).sign(cap)

    def midpoint(self) -> Fraction:
        if self._bits < 0:
            self.refine(config.START_BITS)
        return Fraction(self._lo + self._hi, 2 << self._bits)

    def radius(self) -> Fraction:
        if self._bits < 0:
            self.refine(config.START_BITS)
        return Fraction(self._hi - self._lo, 2 << self._bits)

    @property
    def precision(self) -> int:
        return self._bits

    def __float__(self) -> float:
        lo, hi = self.refine(max(64, self._bits))
        return (lo + hi) / 2.0 / (1 << max(64, self._bits))

    # -- arithmetic ---------------------------------------------------------------

    def _binary(self, op: str, other, reflected=False):
        try:
            o = AdaptiveReal.ensure(other)
        except TypeError:
            return NotImplemented
        args = (o, self) if reflected else (self, o)
        return AdaptiveReal(op, args)

    def __add__(self, other):
        return self._binary("add", other)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary("sub", other)

    def __rsub__(self, other):
        return self._binary("sub", other, reflected=True)

    def __mul__(self, other):
        return self._binary("mul", other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary("div", other)

    def __rtruediv__(self, other):
        return self._binary("div", other, reflected=True)

    def __neg__(self):
        return AdaptiveReal("neg", (self,))

    # comparisons resolve via interval refinement and may raise PrecisionError

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __repr__(self):
        if self._bits < 0:
            return f"AdaptiveReal<{self._op}, unevaluated>"
        return f"AdaptiveReal<~{float(self):.12g} @ {self._bits} bits>"
