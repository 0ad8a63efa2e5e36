"""The ExactReal tagged union: Fraction | QuadraticSurd | AdaptiveReal.

Arithmetic mixes freely through the operator protocol (Fraction + surd
promotes to surd, distinct surd fields promote to AdaptiveReal).  This
module adds the pieces the dunders cannot carry: generic comparison, floor,
text parsing and bit-exact formatting.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from . import config
from .adaptive import AdaptiveReal
from .errors import DomainError
from .surd import QuadraticSurd, surd

ExactReal = Fraction | QuadraticSurd | AdaptiveReal

_SURD_RE = re.compile(
    r"^\(\s*(?P<p>[+-]?\d+)\s*(?P<q>[+-]\s*\d+)\s*\*\s*sqrt\(\s*(?P<d>\d+)\s*\)\s*\)"
    r"\s*/\s*(?P<r>\d+)$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+([eE][+-]?\d+))([eE][+-]?\d+)?$")


def ex_cmp(a, b) -> int:
    """Three-way exact comparison; adaptive operands may raise PrecisionError."""
    if isinstance(a, AdaptiveReal) or isinstance(b, AdaptiveReal):
        return AdaptiveReal.ensure(a).cmp(b)
    if isinstance(a, QuadraticSurd):
        return a._cmp(b)
    if isinstance(b, QuadraticSurd):
        return -b._cmp(a)
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def ex_floor(x) -> int:
    if isinstance(x, AdaptiveReal):
        return x.floor()
    return math.floor(x)


def ex_sign(x) -> int:
    if isinstance(x, AdaptiveReal):
        return x.sign()
    if isinstance(x, QuadraticSurd):
        return x.sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


def is_exact_tag(x) -> bool:
    """True for the exact tags (rational or surd); False for adaptive."""
    return isinstance(x, (int, Fraction, QuadraticSurd))


def to_float(x) -> float:
    return float(x)


def to_mpf(x, bits: int | None = None):
    """Convert to an mpmath float at the requested precision."""
    import mpmath

    bits = config.default_bits() if bits is None else bits
    with mpmath.workprec(bits + 16):
        if isinstance(x, (int, Fraction)):
            f = Fraction(x)
            return mpmath.mpf(f.numerator) / f.denominator
        if isinstance(x, QuadraticSurd):
            return (x.p + x.q * mpmath.sqrt(x.d)) / x.r
        if isinstance(x, AdaptiveReal):
            lo, hi = x.refine(bits + 16)
            return mpmath.mpf(lo + hi) / (2 << (bits + 16))
        return mpmath.mpf(x)


def parse_exact(text: str) -> ExactReal:
    """Parse "p/q", "(p+q*sqrt(d))/r" or a decimal literal.

    Decimal literals become AdaptiveReal (exact binary-free carrier for a
    value the caller wrote approximately); the two exact forms round-trip
    bit-exactly through :func:`format_exact`.
    """
    s = text.strip()
    m = _SURD_RE.match(s)
    if m:
        q = int(m.group("q").replace(" ", ""))
        return surd(int(m.group("p")), q, int(m.group("d")), int(m.group("r")))
    if _DECIMAL_RE.match(s):
        return AdaptiveReal.from_rational(Fraction(s))
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse exact literal {text!r}") from exc


def format_exact(x, decimals: int = 17) -> str:
    """Bit-exact text for rational/surd; decimal rendering for adaptive."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, QuadraticSurd):
        return f"({x.p}{x.q:+d}*sqrt({x.d}))/{x.r}"
    if isinstance(x, AdaptiveReal):
        return repr(float(x))
    return repr(x)
