"""Regular and semi-regular continued fraction words.

Covers encoding/decoding (including Lagrange period detection for quadratic
irrationals), the complement identity for 1-x, the alternating ordering,
signed-digit expansions generated by the flipped maps, Perron convergents,
and the purely symbolic action of R = 1 - G on digit strings.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .adaptive import AdaptiveReal
from .errors import CfdynError, DomainError, InsufficientDigitsError
from .exactreal import ex_cmp, ex_floor
from .maps import Alpha, SignedDigit, orbit
from .surd import QuadraticSurd, surd


@dataclass(frozen=True)
class RcfWord:
    """Regular CF word: explicit digits, optionally a repeating tail."""

    digits: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self):
        if any(d < 1 for d in self.digits) or any(d < 1 for d in self.period):
            raise DomainError("regular CF digits must be >= 1")

    @property
    def is_finite(self) -> bool:
        return not self.period

    def digit_at(self, i: int) -> int:
        if i < len(self.digits):
            return self.digits[i]
        if not self.period:
            raise InsufficientDigitsError(f"word {self} has no digit {i}")
        return self.period[(i - len(self.digits)) % len(self.period)]

    def unrolled(self, n: int) -> "RcfWord":
        """Equivalent word with at least n explicit digits."""
        if len(self.digits) >= n or not self.period:
            return self
        reps = -(-(n - len(self.digits)) // len(self.period))
        extra = (self.period * reps)[: n - len(self.digits)]
        shift = (n - len(self.digits)) % len(self.period)
        rotated = self.period[shift:] + self.period[:shift]
        return RcfWord(self.digits + tuple(extra), rotated)

    def canonical(self) -> "RcfWord":
        """Finite form with last digit >= 2 (periodic words are unchanged)."""
        if self.period or len(self.digits) < 2 or self.digits[-1] != 1:
            return self
        body = list(self.digits[:-1])
        body[-1] += 1
        return RcfWord(tuple(body))

    def long_form(self) -> "RcfWord":
        """Finite form ending in 1: [.., a_n] -> [.., a_n - 1, 1]."""
        w = self.canonical()
        if w.period or not w.digits:
            raise DomainError("long form needs a finite nonempty word")
        if w.digits[-1] < 2:
            if w.digits == (1,):
                raise DomainError("1 has no long form")
            raise AssertionError("canonical form should end >= 2")
        return RcfWord(w.digits[:-1] + (w.digits[-1] - 1, 1))

    def value(self):
        """Exact value: Fraction if finite, quadratic surd otherwise."""
        if self.period:
            return periodic_cf_value(self.digits, self.period)
        num, den = 0, 1
        for d in reversed(self.digits):
            num, den = den, num + d * den
        return Fraction(num, den)

    def __str__(self):
        inside = ",".join(str(d) for d in self.digits)
        if self.period:
            tail = "(" + ",".join(str(d) for d in self.period) + ")~"
            inside = inside + "," + tail if inside else tail
        return f"[{inside}]"


_WORD_RE = re.compile(r"^\[(?P<body>[^\]]*)\]$")
_PERIOD_RE = re.compile(r"\((?P<p>[0-9,]+)\)~$")


def parse_rcf(text: str) -> RcfWord:
    m = _WORD_RE.match(text.strip())
    if not m:
        raise DomainError(f"bad RCF word {text!r}")
    body = m.group("body").replace(" ", "")
    period: tuple[int, ...] = ()
    pm = _PERIOD_RE.search(body)
    if pm:
        period = tuple(int(t) for t in pm.group("p").split(","))
        body = body[: pm.start()].rstrip(",")
    digits = tuple(int(t) for t in body.split(",")) if body else ()
    return RcfWord(digits, period)


def _mobius(digits) -> tuple[int, int, int, int]:
    """Matrix (a,b,c,d): appending tail y after `digits` gives (a y + b)/(c y + d)."""
    a, b, c, d = 1, 0, 0, 1
    for n in digits:
        # right-multiply by [[0,1],[1,n]]
        a, b, c, d = b, a + n * b, d, c + n * d
    return a, b, c, d


def periodic_cf_value(preperiod, period):
    """Exact value of [pre, periodic tail] as a quadratic surd.

    Solves the fixed-point quadratic of the period's Moebius map, takes the
    root in (0, 1), then pushes it through the preperiod.
    """
    preperiod, period = tuple(preperiod), tuple(period)
    if not period:
        raise DomainError("period must be non-empty")
    if any(n < 1 for n in preperiod + period):
        raise DomainError("digits must be >= 1")
    a, b, c, d = _mobius(period)
    # y = (a y + b)/(c y + d)  =>  c y^2 + (d - a) y - b = 0
    disc = (d - a) * (d - a) + 4 * c * b
    y = surd(a - d, 1, disc, 2 * c)
    if not (ex_cmp(y, 0) > 0 and ex_cmp(y, 1) < 0):
        raise CfdynError("period fixed point escaped (0,1); invalid digit data")
    pa, pb, pc, pd = _mobius(preperiod)
    return (pa * y + pb) / (pc * y + pd)


def rcf_expand(x, max_digits: int = 64) -> RcfWord:
    """Regular CF word of x in (0,1).

    Rationals give the finite canonical word, quadratic surds the exact
    eventually-periodic word, adaptive reals a prefix of up to `max_digits`.
    """
    if isinstance(x, (int, float)):
        x = Fraction(x)
    if ex_cmp(x, 0) <= 0 or ex_cmp(x, 1) >= 0:
        raise DomainError("rcf_expand needs x strictly inside (0,1)")
    if isinstance(x, Fraction):
        digits = []
        while x:
            t = 1 / x
            a = math.floor(t)
            digits.append(a)
            x = t - a
        return RcfWord(tuple(digits))
    if isinstance(x, QuadraticSurd):
        seen: dict[QuadraticSurd, int] = {}
        digits: list[int] = []
        state = x
        while state not in seen:
            seen[state] = len(digits)
            t = 1 / state
            a = math.floor(t)
            digits.append(a)
            state = t - a
            if isinstance(state, Fraction):
                raise AssertionError("surd Gauss orbit left the field")
        start = seen[state]
        return RcfWord(tuple(digits[:start]), tuple(digits[start:]))
    if isinstance(x, AdaptiveReal):
        digits = []
        state = x
        for _ in range(max_digits):
            t = 1 / state
            a = t.floor()
            digits.append(a)
            state = t - a
        return RcfWord(tuple(digits))
    raise TypeError(f"cannot expand {type(x).__name__}")


def one_minus(word: RcfWord) -> RcfWord:
    """[a1, a2, ...] -> [1, a1 - 1, a2, ...], the word of 1 - x (x <= 1/2)."""
    if not word.digits:
        raise DomainError("empty word")
    a1 = word.digits[0]
    if a1 < 2:
        raise DomainError("one_minus needs a1 >= 2 (value <= 1/2)")
    return RcfWord((1, a1 - 1) + word.digits[1:], word.period)


def alternating_compare(u: RcfWord, v: RcfWord) -> int:
    """-1, 0, +1 following the alternating order, i.e. numeric order of values.

    Infinite (periodic) words compare digitwise: at the first mismatch m
    (1-based), the order of (-1)^m a_m decides.  Any finite word falls back
    to exact value comparison, which sidesteps the double representation of
    rationals.
    """
    if u.is_finite or v.is_finite:
        return ex_cmp(u.value(), v.value())
    scan = len(u.digits) + len(v.digits) + 2 * _lcm(len(u.period), len(v.period)) + 2
    for i in range(scan):
        a, b = u.digit_at(i), v.digit_at(i)
        if a != b:
            s = (a > b) - (a < b)
            return -s if i % 2 == 0 else s
    return ex_cmp(u.value(), v.value())


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class SemiRegularWord:
    """Finite prefix of a signed-digit expansion."""

    digits: tuple[SignedDigit, ...]

    def __len__(self):
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __str__(self):
        return "[" + ", ".join(str(sd) for sd in self.digits) + "]"


_SR_ITEM = re.compile(r"^(?P<e>[+-]1)/(?P<d>\d+)$")


def parse_semiregular(text: str) -> SemiRegularWord:
    m = _WORD_RE.match(text.strip())
    if not m:
        raise DomainError(f"bad semi-regular word {text!r}")
    body = m.group("body").strip()
    if not body:
        return SemiRegularWord(())
    items = []
    for part in body.split(","):
        im = _SR_ITEM.match(part.strip())
        if not im:
            raise DomainError(f"bad semi-regular entry {part!r}")
        items.append(SignedDigit(int(im.group("e")), int(im.group("d"))))
    return SemiRegularWord(tuple(items))


def semiregular_expand(x, alpha, n: int) -> SemiRegularWord:
    """First n signed digits of the flipped expansion of x."""
    alpha = Alpha.of(alpha)
    tr = orbit(x, alpha, n)
    return SemiRegularWord(tuple(tr.digits()))


class ConvergentPair(NamedTuple):
    p: int
    q: int


def convergents(word: SemiRegularWord) -> list[ConvergentPair]:
    """Raw Perron recurrence values p_n, q_n of the signed-digit word.

    p_n = d_n p_{n-1} + e_n p_{n-2} with e_1 = 1 and e_n = eps_{n-1}; the
    pairs are reported unreduced.
    """
    p2, p1 = 1, 0  # p_{-1}, p_0
    q2, q1 = 0, 1
    out = []
    for i, sd in enumerate(word.digits):
        e = 1 if i == 0 else word.digits[i - 1].eps
        p = sd.d * p1 + e * p2
        q = sd.d * q1 + e * q2
        out.append(ConvergentPair(p, q))
        p2, p1, q2, q1 = p1, p, q1, q
    return out


def tower_value(word: SemiRegularWord, tail):
    """Exact value of the finite tower with remainder `tail` substituted.

    Equals (p_n + p_{n-1} eps_n t)/(q_n + q_{n-1} eps_n t): the truncation
    identity that every expansion must satisfy at every depth.
    """
    if not word.digits:
        return tail
    cs = convergents(word)
    pn, qn = cs[-1]
    pm, qm = cs[-2] if len(cs) > 1 else (0, 1)
    e = word.digits[-1].eps
    return (pn + pm * e * tail) / (qn + qm * e * tail)


def _r_step(word: RcfWord) -> RcfWord:
    w = word.canonical()
    if w.is_finite and len(w.digits) < 2:
        raise InsufficientDigitsError(
            f"cannot apply R symbolically to {word}: digits exhausted")
    w = w.unrolled(3)
    x2 = w.digit_at(1)
    if x2 > 1:
        return RcfWord((1, x2 - 1) + w.digits[2:], w.period)
    if w.is_finite and len(w.digits) < 3:
        raise InsufficientDigitsError(
            f"cannot apply R symbolically to {word}: digits exhausted")
    x3 = w.digit_at(2)
    return RcfWord((x3 + 1,) + w.digits[3:], w.period)


def r_word(word: RcfWord, k: int) -> RcfWord:
    """Word of R^k(x) computed purely symbolically.

    One step rewrites [x1, x2, ...] to [1, x2 - 1, x3, ...] when x2 > 1 and
    to [x3 + 1, x4, ...] when x2 = 1.  Finite (rational) words eventually
    exhaust their digits, at which point InsufficientDigitsError is raised;
    callers needing more fall back to the direct orbit of R.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    for _ in range(k):
        word = _r_step(word)
    return word
