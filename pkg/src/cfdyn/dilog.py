"""Dilogarithm Li2 on [-1, 1], plus the real-axis extension used internally.

The power series converges fast only on |x| <= 1/2, so larger arguments are
folded into that disc with two functional equations:

    Li2(x) + Li2(1-x)        = pi^2/6 - log(x) log(1-x)      (0 < x < 1)
    Li2(x) + Li2(-x/(1-x))   = -log(1-x)^2 / 2               (x < 1)

The second identity, read right-to-left, also evaluates arguments below -1,
which the entropy integrals need.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from . import config
from .errors import DomainError
from .exactreal import to_mpf

_GUARD = 24


def _series(x, bits: int):
    # |x| <= 1/2: term ratio <= 1/2, so ~bits+guard terms suffice
    total = mpmath.mpf(0)
    power = mpmath.mpf(1)
    eps = mpmath.mpf(2) ** (-(bits + 8))
    n = 1
    while True:
        power *= x
        term = power / (n * n)
        total += term
        if abs(term) < eps:
            return total
        n += 1


def _dilog_ext(x, bits: int):
    """Li2 on (-inf, 1] at ~bits precision (mpmath workprec must be set)."""
    if x == 1:
        return mpmath.pi ** 2 / 6
    if x < -1:
        # x = u/(u-1) maps u < -1 back into (1/2, 1)
        u = x / (x - 1)
        return -mpmath.log(1 - x) ** 2 / 2 - _dilog_ext(u, bits)
    if x > mpmath.mpf(1) / 2:
        return (mpmath.pi ** 2 / 6 - mpmath.log(x) * mpmath.log(1 - x)
                - _dilog_ext(1 - x, bits))
    if x < -mpmath.mpf(1) / 2:
        u = -x / (1 - x)  # lands in (1/3, 1/2]
        return -mpmath.log(1 - x) ** 2 / 2 - _series(u, bits)
    return _series(x, bits)


def dilog(x, bits: int | None = None):
    """Li2(x) for -1 <= x <= 1 as an mpmath float at `bits` precision."""
    bits = config.default_bits() if bits is None else bits
    with mpmath.workprec(bits + _GUARD):
        xm = to_mpf(x, bits)
        if xm < -1 or xm > 1:
            raise DomainError(f"dilog argument {float(xm)} outside [-1, 1]")
        result = _dilog_ext(xm, bits + _GUARD)
    return +result


def dilog_real(x, bits: int | None = None):
    """Li2 on the real axis up to 1 (arguments < -1 allowed); internal use."""
    bits = config.default_bits() if bits is None else bits
    with mpmath.workprec(bits + _GUARD):
        xm = to_mpf(x, bits)
        if xm > 1:
            raise DomainError(f"dilog_real argument {float(xm)} exceeds 1")
        result = _dilog_ext(xm, bits + _GUARD)
    return +result
