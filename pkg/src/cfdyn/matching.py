"""Matching detection and matching-interval enumeration.

The orbits of alpha and 1-alpha under T_alpha merge for almost every
parameter; the (M, N) pair with T^M(alpha) = T^N(1-alpha) is located by
breadth-first growth of both orbits.  Parameter windows with constant
exponents are enumerated from maximal quadratic intervals: each rational
pseudocenter a contributes the two components of 1/(1+I_a), with exponents
read off the digit parity of a.
"""

from __future__ import annotations

import bisect
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .adaptive import AdaptiveReal
from .cf import RcfWord, alternating_compare, periodic_cf_value, rcf_expand
from .errors import DomainError, EmptyWindowError
from .exactreal import ExactReal, ex_cmp, format_exact, is_exact_tag
from .maps import Alpha, digit, t_alpha
from .surd import GOLDEN_G, QuadraticSurd


@dataclass(frozen=True)
class MatchingResult:
    matched: bool
    M: int | None
    N: int | None
    common_value: ExactReal | float | None
    steps_used: int
    mode: str                       # "exact" or "numerical"
    tolerance: float | None = None

    def exponents(self):
        return (self.M, self.N)


@dataclass(frozen=True)
class PseudoCenter:
    """Rational a with its two regular CF expansions."""

    a: Fraction
    word_short: RcfWord             # last digit >= 2 (just [1] for a = 1)
    word_long: RcfWord | None       # ends in 1; None for a = 1

    @classmethod
    def of(cls, a) -> "PseudoCenter":
        a = Fraction(a)
        if not 0 < a <= 1:
            raise DomainError("pseudocenter must lie in (0, 1]")
        if a == 1:
            return cls(a, RcfWord((1,)), None)
        short = rcf_expand(a).canonical()
        return cls(a, short, short.long_form())

    @property
    def even_word(self) -> RcfWord:
        """The expansion of even length (every rational has exactly one)."""
        if self.a == 1:
            raise DomainError("a = 1 is handled separately")
        if len(self.word_short.digits) % 2 == 0:
            return self.word_short
        return self.word_long


@dataclass(frozen=True)
class MatchingWindow:
    center: PseudoCenter
    side: str                       # "L" or "R"
    left: ExactReal
    right: ExactReal
    M: int
    N: int

    def contains(self, alpha) -> bool:
        return ex_cmp(self.left, alpha) < 0 and ex_cmp(alpha, self.right) < 0

    def as_record(self) -> dict:
        return {
            "center": format_exact(self.center.a),
            "side": self.side,
            "left": format_exact(self.left),
            "right": format_exact(self.right),
            "M": self.M,
            "N": self.N,
        }


# ---------------------------------------------------------------------------
# detection


def _detect_exact(alpha: Alpha, max_steps: int) -> MatchingResult:
    a = alpha.value
    orbits = [[a], [1 - a]]
    index = [{orbits[0][0]: 0}, {orbits[1][0]: 0}]
    frozen = [ex_cmp(orbits[0][0], 1) == 0, ex_cmp(orbits[1][0], 1) == 0]
    best = None  # (sum, M, N)

    def note(m, n):
        nonlocal best
        cand = (m + n, m, n)
        if best is None or cand < best:
            best = cand

    if orbits[0][0] == orbits[1][0]:
        note(0, 0)
    t = 0
    while t < max_steps:
        t += 1
        for side in (0, 1):
            if frozen[side]:
                continue
            nxt = t_alpha(orbits[side][-1], alpha)
            orbits[side].append(nxt)
            if nxt not in index[side]:
                index[side][nxt] = t
            other = index[1 - side].get(nxt)
            if other is not None:
                note(t, other) if side == 0 else note(other, t)
            if ex_cmp(nxt, 1) == 0:
                frozen[side] = True
        if best is not None and t >= best[0]:
            break
    if best is None:
        return MatchingResult(False, None, None, None, t, "exact")
    s, m, n = best
    common = orbits[0][m] if m < len(orbits[0]) else Fraction(1)
    return MatchingResult(True, m, n, common, t, "exact")


def _float_step(x: float, a: float) -> float:
    t = 1.0 / x
    n = math.floor(t)
    f = t - n
    if f <= a:
        return (n + 1) - t
    return f


def _detect_orbits_numeric(x0, y0, alpha_val, one, step,
                           max_steps: int, tol) -> tuple:
    """Shared numeric matcher: breadth-first orbit growth, window lookups."""
    orb = [[x0], [y0]]
    sorted_vals = [[x0], [y0]]
    sorted_idx = [[0], [0]]
    frozen = [x0 == one, y0 == one]
    best = None

    def probe(side, value, at):
        nonlocal best
        vals, idxs = sorted_vals[1 - side], sorted_idx[1 - side]
        lo = bisect.bisect_left(vals, value - tol)
        hi = bisect.bisect_right(vals, value + tol)
        for k in range(lo, hi):
            j = idxs[k]
            m, n = (at, j) if side == 0 else (j, at)
            cand = (m + n, m, n)
            if best is None or cand < best:
                best = cand

    if abs(x0 - y0) <= tol:
        best = (0, 0, 0)
    t = 0
    while t < max_steps:
        t += 1
        for side in (0, 1):
            if frozen[side]:
                continue
            cur = orb[side][-1]
            if not (cur > 0):
                frozen[side] = True
                continue
            nxt = step(cur, alpha_val)
            orb[side].append(nxt)
            probe(side, nxt, t)
            pos = bisect.bisect_left(sorted_vals[side], nxt)
            sorted_vals[side].insert(pos, nxt)
            sorted_idx[side].insert(pos, t)
            if nxt == one:
                frozen[side] = True
        if best is not None and t >= best[0]:
            break
    return best, orb, t


# Numeric matching escalates through these orbit precisions (bits).  Double
# rounding noise outgrows a 1e-12 tolerance after a few dozen steps, so
# genuinely matching parameters with larger exponents need a second look at
# higher precision before being declared unmatched.
_NUMERIC_LADDER = (0, 256, 512)


def _detect_float(a: float, max_steps: int, tol: float) -> MatchingResult:
    import mpmath

    for bits in _NUMERIC_LADDER:
        if bits == 0:
            best, orb, t = _detect_orbits_numeric(
                a, 1.0 - a, a, 1.0, _float_step, max_steps, tol)
        else:
            with mpmath.workprec(bits):
                am = mpmath.mpf(a)
                best, orb, t = _detect_orbits_numeric(
                    am, 1 - am, am, mpmath.mpf(1), _mpf_step,
                    max_steps, mpmath.mpf(tol))
        if best is not None:
            s, m, n = best
            common = float(orb[0][m]) if m < len(orb[0]) else 1.0
            return MatchingResult(True, m, n, common, t, "numerical", tol)
    return MatchingResult(False, None, None, None, max_steps, "numerical", tol)


def _mpf_step(x, a):
    import mpmath

    t = 1 / x
    n = mpmath.floor(t)
    f = t - n
    if f <= a:
        return (n + 1) - t
    return f


def detect_matching(alpha, max_steps: int = 200,
                    tolerance: float = 1e-12) -> MatchingResult:
    """Minimal (M+N, then M) pair with T^M(alpha) matching T^N(1-alpha).

    Exact parameters (rational or quadratic surd) match by exact equality;
    adaptive/float parameters run in double precision with the tolerance.
    """
    if isinstance(alpha, float):
        if not 0.0 < alpha < 1.0:
            raise DomainError("alpha must lie in (0,1)")
        return _detect_float(alpha, max_steps, tolerance)
    alpha = Alpha.of(alpha)
    if max_steps < 1:
        raise DomainError("max_steps must be >= 1")
    if is_exact_tag(alpha.value):
        return _detect_exact(alpha, max_steps)
    return _detect_float(float(AdaptiveReal.ensure(alpha.value)),
                         max_steps, tolerance)


def entry_times(alpha, max_steps: int = 500) -> tuple[int | None, int | None]:
    """First indices at which the orbits of alpha and 1-alpha leave the
    flip region (enter a Gauss branch); None when not within budget."""
    alpha = Alpha.of(alpha)
    if ex_cmp(alpha.value, Fraction(1, 2)) <= 0:
        raise DomainError("entry_times needs alpha > 1/2")
    out = []
    for start in (alpha.value, 1 - alpha.value):
        point = start
        found = None
        for i in range(max_steps):
            if is_exact_tag(point) and ex_cmp(point, 1) == 0:
                break  # fixed point never leaves the flip region
            sd = digit(point, alpha)
            if sd.eps == 1:
                found = i
                break
            point = sd.eps * (1 / point - sd.d)
        out.append(found)
    return out[0], out[1]


def entry_time_targets(alpha, count: int = 8) -> tuple[list[int], list[int]]:
    """Admissible entry times from the digits of alpha = [1, a1, a2, ...]:
    partial sums a1+a3+...-1 for the alpha orbit, a2+a4+...-1 for 1-alpha."""
    alpha = Alpha.of(alpha)
    word = rcf_expand(alpha.value, max_digits=2 * count + 4)
    w = word.unrolled(2 * count + 2)
    if w.digit_at(0) != 1:
        raise DomainError("alpha > 1/2 must expand as [1, a1, a2, ...]")
    have = len(w.digits) if w.is_finite else 2 * count + 2
    tail = [w.digit_at(i) for i in range(1, have)]
    odd, even = [], []
    s = 0
    for i in range(0, len(tail), 2):
        s += tail[i]
        odd.append(s - 1)
    s = 0
    for i in range(1, len(tail), 2):
        s += tail[i]
        even.append(s - 1)
    return odd, even


# ---------------------------------------------------------------------------
# maximal quadratic intervals and windows


def _string_cmp(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    return alternating_compare(RcfWord(u), RcfWord(v))


def is_maximal(center: PseudoCenter | Fraction | int) -> bool:
    """Whether no other quadratic interval properly contains I_a.

    Tested via the split criterion on the even-length expansion S of a:
    every proper split S = u v must satisfy v strictly above u v in the
    alternating order.
    """
    if not isinstance(center, PseudoCenter):
        center = PseudoCenter.of(center)
    if center.a == 1:
        return True
    s = center.even_word.digits
    for cut in range(1, len(s)):
        u, v = s[:cut], s[cut:]
        if _string_cmp(v, u + v) <= 0:
            return False
    return True


def quadratic_interval(center: PseudoCenter | Fraction | int):
    """Ordered endpoints of I_a: the two purely periodic continuations."""
    if not isinstance(center, PseudoCenter):
        center = PseudoCenter.of(center)
    if center.a == 1:
        return (GOLDEN_G, Fraction(1))
    lo = periodic_cf_value((), center.word_short.digits)
    hi = periodic_cf_value((), center.word_long.digits)
    if ex_cmp(lo, hi) > 0:
        lo, hi = hi, lo
    return lo, hi


def _window_exponents(short: tuple[int, ...]) -> tuple[int, int]:
    n = len(short)
    if n % 2 == 1:
        return sum(short[0::2]), sum(short[1::2]) + 2
    return sum(short[0::2]) + 1, sum(short[1::2]) + 1


def matching_window(center: PseudoCenter | Fraction | int,
                    side: str) -> MatchingWindow:
    """The parameter window J_a^L or J_a^R with its matching exponents."""
    if not isinstance(center, PseudoCenter):
        center = PseudoCenter.of(center)
    if side not in ("L", "R"):
        raise DomainError("side must be 'L' or 'R'")
    short = center.word_short.digits
    if center.a == 1 and side == "L":
        raise EmptyWindowError("pseudocenter 1 has an empty left window")
    n = len(short)
    mid = 1 / (1 + center.a)
    y_short = periodic_cf_value((), short)
    y_long = (periodic_cf_value((), center.word_long.digits)
              if center.word_long is not None else None)
    if n % 2 == 1:
        left, right = ((1 / (1 + y_long), mid) if side == "L"
                       else (mid, 1 / (1 + y_short)))
    else:
        left, right = ((1 / (1 + y_short), mid) if side == "L"
                       else (mid, 1 / (1 + y_long)))
    m, nn = _window_exponents(short)
    if side == "R":
        m, nn = m + 1, nn - 1
    if ex_cmp(left, right) >= 0:
        raise AssertionError(f"degenerate window for a={center.a} side={side}")
    return MatchingWindow(center, side, left, right, m, nn)


def pseudocenters(max_denominator: int):
    """All rationals in (0, 1] with denominator <= max_denominator."""
    seen = set()
    out = [PseudoCenter.of(1)]
    for q in range(2, max_denominator + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                a = Fraction(p, q)
                if a not in seen:
                    seen.add(a)
                    out.append(PseudoCenter.of(a))
    return out


def enumerate_windows(max_denominator: int) -> list[MatchingWindow]:
    """Windows of all maximal pseudocenters with bounded denominator,
    sorted by left endpoint; pairwise disjoint."""
    if max_denominator < 1:
        raise DomainError("max_denominator must be >= 1")
    wins = []
    for pc in pseudocenters(max_denominator):
        if not is_maximal(pc):
            continue
        for side in ("L", "R"):
            if pc.a == 1 and side == "L":
                continue
            wins.append(matching_window(pc, side))
    import functools

    wins.sort(key=functools.cmp_to_key(lambda u, v: ex_cmp(u.left, v.left)))
    return wins


def simplest_rational_between(lo, hi) -> Fraction:
    """Stern-Brocot walk to the minimal-denominator rational in (lo, hi)."""
    if ex_cmp(lo, hi) >= 0:
        raise DomainError("empty interval")
    ln, ld, hn, hd = 0, 1, 1, 0
    while True:
        mn, md = ln + hn, ld + hd
        m = Fraction(mn, md)
        if ex_cmp(m, lo) <= 0:
            ln, ld = mn, md
        elif ex_cmp(m, hi) >= 0:
            hn, hd = mn, md
        else:
            return m


def interior_samples(window: MatchingWindow, count: int = 3) -> list[Fraction]:
    """`count` rationals strictly inside the window, small denominators."""
    picks = [simplest_rational_between(window.left, window.right)]
    spans = [(window.left, picks[0]), (picks[0], window.right)]
    while len(picks) < count and spans:
        lo, hi = spans.pop(0)
        mid = simplest_rational_between(lo, hi)
        picks.append(mid)
        spans.extend([(lo, mid), (mid, hi)])
    return picks[:count]


# ---------------------------------------------------------------------------
# parameter-space scans


@dataclass
class ScanReport:
    n_samples: int
    max_steps: int
    tolerance: float
    seed: int
    matched: int
    histogram: dict[tuple[int, int], int]
    unmatched_alphas: list[float]

    @property
    def matched_fraction(self) -> float:
        return self.matched / self.n_samples if self.n_samples else 0.0

    def to_json(self) -> str:
        payload = {
            "n_samples": self.n_samples,
            "max_steps": self.max_steps,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "matched": self.matched,
            "matched_fraction": self.matched_fraction,
            "histogram": {f"{m},{n}": c
                          for (m, n), c in sorted(self.histogram.items())},
            "unmatched_alphas": self.unmatched_alphas,
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    def to_csv(self) -> str:
        lines = ["M,N,count"]
        for (m, n), c in sorted(self.histogram.items()):
            lines.append(f"{m},{n},{c}")
        return "\n".join(lines) + "\n"


def scan_parameters(n_samples: int, max_steps: int = 200,
                    tolerance: float = 1e-12, seed: int = 0) -> ScanReport:
    """Uniform seeded sample of parameters, numerical matching per sample."""
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    rng = random.Random(seed)
    hist: dict[tuple[int, int], int] = {}
    unmatched: list[float] = []
    matched = 0
    for _ in range(n_samples):
        a = 0.0
        while a <= 0.0 or a >= 1.0:
            a = rng.random()
        res = _detect_float(a, max_steps, tolerance)
        if res.matched:
            matched += 1
            key = (res.M, res.N)
            hist[key] = hist.get(key, 0) + 1
        else:
            unmatched.append(a)
    return ScanReport(n_samples, max_steps, tolerance, seed,
                      matched, hist, unmatched)


def windows_to_json(windows: list[MatchingWindow]) -> str:
    return json.dumps([w.as_record() for w in windows], sort_keys=True, indent=2)


def windows_to_csv(windows: list[MatchingWindow]) -> str:
    lines = ["center,side,left,right,M,N"]
    for w in windows:
        r = w.as_record()
        lines.append(f"{r['center']},{r['side']},{r['left']},{r['right']},"
                     f"{r['M']},{r['N']}")
    return "\n".join(lines) + "\n"
