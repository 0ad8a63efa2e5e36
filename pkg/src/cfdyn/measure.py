"""Invariant densities and derived quantities of the flipped maps.

Each density is a breakpoint-delimited combination of the basis terms 1/x,
1/(1+x), 1/(1-x) and 1/(x+c) with golden-ratio shifts c.  The density is
not normalised (total mass is infinite); coefficients are kept exactly so
closed-form window masses come out verbatim.  Correctness is pinned by the
transfer-operator fixed-point check, which runs in exact arithmetic for
rational parameters and grid points.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import config
from .dilog import dilog_real
from .errors import BreakpointHitError, DomainError
from .exactreal import ExactReal, ex_cmp, format_exact, to_mpf
from .maps import Alpha, branches, orbit
from .surd import GOLDEN_G, INV_SQRT2

RECIP = "recip"                    # 1/x
RECIP_ONE_PLUS = "recip_one_plus"  # 1/(1+x)
RECIP_ONE_MINUS = "recip_one_minus"  # 1/(1-x)
RECIP_SHIFT = "recip_shift"        # 1/(x+c)

INV_G = 1 / GOLDEN_G               # (1+sqrt 5)/2
INV_G_MINUS_ONE = 1 / (GOLDEN_G - 1)   # -(3+sqrt 5)/2
INV_G_PLUS_ONE = 1 / (GOLDEN_G + 1)    # equals g itself


@dataclass(frozen=True)
class BasisTerm:
    kind: str
    coeff: ExactReal = Fraction(1)
    shift: ExactReal | None = None

    def __post_init__(self):
        if self.kind not in (RECIP, RECIP_ONE_PLUS, RECIP_ONE_MINUS, RECIP_SHIFT):
            raise DomainError(f"unknown basis kind {self.kind!r}")
        if (self.shift is None) == (self.kind == RECIP_SHIFT):
            raise DomainError("shift is required exactly for recip_shift terms")

    def eval(self, x):
        if self.kind == RECIP:
            return self.coeff / x
        if self.kind == RECIP_ONE_PLUS:
            return self.coeff / (1 + x)
        if self.kind == RECIP_ONE_MINUS:
            return self.coeff / (1 - x)
        return self.coeff / (x + self.shift)

    def scaled(self, k) -> "BasisTerm":
        return BasisTerm(self.kind, self.coeff * k, self.shift)


@dataclass(frozen=True)
class PiecewiseDensity:
    breakpoints: tuple          # ascending ExactReal values, len = pieces + 1
    pieces: tuple               # tuple of tuples of BasisTerm

    @property
    def support(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x, strict: bool = False) -> int:
        bps = self.breakpoints
        if ex_cmp(x, bps[0]) < 0 or ex_cmp(x, bps[-1]) > 0:
            raise DomainError(f"{x!r} outside the density support")
        for i in range(len(self.pieces)):
            c_lo = ex_cmp(x, bps[i])
            c_hi = ex_cmp(x, bps[i + 1])
            if strict and (c_lo == 0 or (c_hi == 0 and i < len(self.pieces) - 1)):
                raise BreakpointHitError(f"{x!r} sits on a breakpoint")
            if c_lo >= 0 and (c_hi < 0 or (c_hi <= 0 and i == len(self.pieces) - 1)):
                return i
        raise AssertionError("piece lookup fell through")

    def eval(self, x, strict: bool = False):
        i = self.piece_index(x, strict)
        total = Fraction(0)
        for term in self.pieces[i]:
            total = total + term.eval(x)
        return total

    def scaled(self, k) -> "PiecewiseDensity":
        return PiecewiseDensity(
            self.breakpoints,
            tuple(tuple(t.scaled(k) for t in piece) for piece in self.pieces))

    def singular_coefficient_at_one(self):
        """Net 1/(1-x) coefficient on the piece touching x = 1."""
        if ex_cmp(self.breakpoints[-1], 1) != 0:
            return Fraction(0)
        total = Fraction(0)
        for term in self.pieces[-1]:
            if term.kind == RECIP_ONE_MINUS:
                total = total + term.coeff
        return total

    def to_json(self) -> str:
        payload = []
        for i, piece in enumerate(self.pieces):
            payload.append({
                "left": format_exact(self.breakpoints[i]),
                "right": format_exact(self.breakpoints[i + 1]),
                "terms": [{
                    "kind": t.kind,
                    "coeff": format_exact(t.coeff),
                    "c": format_exact(t.shift) if t.shift is not None else None,
                } for t in piece],
            })
        return json.dumps(payload, sort_keys=True, indent=2)

    def sample_csv(self, count: int = 200) -> str:
        lo, hi = self.support
        flo, fhi = float(lo), float(hi)
        lines = ["x,f"]
        for i in range(count):
            x = flo + (fhi - flo) * (i + 0.5) / count
            lines.append(f"{x!r},{float(self.eval(Fraction(x)))!r}")
        return "\n".join(lines) + "\n"


def _merge(segments) -> PiecewiseDensity:
    """Merge possibly overlapping (lo, hi, term) segments into disjoint pieces."""
    cuts: list = []
    for lo, hi, _ in segments:
        for value in (lo, hi):
            if not any(ex_cmp(value, c) == 0 for c in cuts):
                cuts.append(value)
    import functools

    cuts.sort(key=functools.cmp_to_key(ex_cmp))
    pieces = []
    kept_cuts = [cuts[0]]
    for i in range(len(cuts) - 1):
        lo, hi = cuts[i], cuts[i + 1]
        terms = tuple(t for (slo, shi, t) in segments
                      if ex_cmp(slo, lo) <= 0 and ex_cmp(shi, hi) >= 0)
        pieces.append(terms)
        kept_cuts.append(hi)
    return PiecewiseDensity(tuple(kept_cuts), tuple(pieces))


def density(alpha) -> PiecewiseDensity:
    """The invariant density on [min(alpha,1-alpha), 1] for alpha < sqrt2/2.

    Four parameter regimes; below 1/2 the three basis terms carry
    overlapping indicators and are merged mechanically into disjoint
    pieces, which stays valid on the whole interval (0, 1/2) even where
    the naive ordering of the cut points degenerates.
    """
    alpha = Alpha.of(alpha)
    a = alpha.value
    if ex_cmp(a, INV_SQRT2) >= 0:
        raise DomainError("explicit densities exist only for alpha < sqrt(2)/2")
    one = Fraction(1)
    if ex_cmp(a, Fraction(1, 2)) < 0:
        segments = [
            (a, a / (1 - a), BasisTerm(RECIP)),
            (a / (1 - a), one, BasisTerm(RECIP_ONE_PLUS)),
            (1 - a, one, BasisTerm(RECIP_ONE_MINUS)),
        ]
        return _merge(segments)
    if ex_cmp(a, GOLDEN_G) < 0:
        segments = [
            (1 - a, a, BasisTerm(RECIP_ONE_MINUS)),
            (a, (1 - a) / a, BasisTerm(RECIP)),
            (a, (1 - a) / a, BasisTerm(RECIP_ONE_MINUS)),
            ((1 - a) / a, one, BasisTerm(RECIP)),
            ((1 - a) / a, one, BasisTerm(RECIP_ONE_MINUS)),
            ((1 - a) / a, one, BasisTerm(RECIP_ONE_PLUS, Fraction(-1))),
        ]
        return _merge(segments)
    if ex_cmp(a, Fraction(2, 3)) < 0:
        lo1, hi1 = 1 - a, (2 * a - 1) / a
        lo3, hi3 = a, (2 * a - 1) / (1 - a)
        segments = [
            (lo1, hi1, BasisTerm(RECIP_ONE_MINUS)),
            (lo1, hi1, BasisTerm(RECIP_SHIFT, shift=INV_G_MINUS_ONE)),
            (hi1, a, BasisTerm(RECIP_ONE_MINUS)),
            (lo3, hi3, BasisTerm(RECIP_ONE_MINUS)),
            (lo3, hi3, BasisTerm(RECIP)),
            (lo3, hi3, BasisTerm(RECIP_SHIFT, Fraction(-1), INV_G)),
            (hi3, one, BasisTerm(RECIP)),
            (hi3, one, BasisTerm(RECIP_ONE_MINUS)),
            (hi3, one, BasisTerm(RECIP_ONE_PLUS, Fraction(-1))),
        ]
        return _merge(segments)
    # alpha in [2/3, sqrt2/2)
    lo1, hi1 = 1 - a, (2 * a - 1) / a
    lo3, hi3 = a, (1 - a) / (2 * a - 1)
    segments = [
        (lo1, hi1, BasisTerm(RECIP_ONE_MINUS)),
        (lo1, hi1, BasisTerm(RECIP_SHIFT, shift=INV_G_MINUS_ONE)),
        (hi1, a, BasisTerm(RECIP_ONE_MINUS)),
        (lo3, hi3, BasisTerm(RECIP_ONE_MINUS)),
        (lo3, hi3, BasisTerm(RECIP)),
        (lo3, hi3, BasisTerm(RECIP_SHIFT, Fraction(-1), INV_G)),
        (hi3, one, BasisTerm(RECIP_ONE_MINUS)),
        (hi3, one, BasisTerm(RECIP_ONE_PLUS)),
        (hi3, one, BasisTerm(RECIP_SHIFT, Fraction(-1), INV_G)),
        (hi3, one, BasisTerm(RECIP)),
        (hi3, one, BasisTerm(RECIP_SHIFT, Fraction(-1), INV_G_PLUS_ONE)),
    ]
    return _merge(segments)


def transfer_apply(f: PiecewiseDensity, alpha, x):
    """Branch sum of the transfer operator: sum f(y_b) y_b^2 over inverse
    branches y_b of x.  Exact for rational/surd inputs.  Raises
    BreakpointHitError if any inverse point lands on a cylinder edge or a
    density breakpoint (callers perturb the grid)."""
    alpha = Alpha.of(alpha)
    total = Fraction(0)
    for br in branches(alpha):
        y = 1 / (br.sd.d + br.sd.eps * x)
        c_lo, c_hi = ex_cmp(y, br.left), ex_cmp(y, br.right)
        if c_lo == 0 or c_hi == 0:
            raise BreakpointHitError(f"inverse point {y!r} on a cylinder edge")
        if c_lo < 0 or c_hi > 0:
            continue
        total = total + f.eval(y, strict=True) * y * y
    return total


def integrate(f: PiecewiseDensity, a, b, bits: int | None = None):
    """Closed-form (log antiderivative) mass of f over [a, b].

    Returns an mpmath float; +inf when b = 1 and the net 1/(1-x)
    coefficient there does not vanish.
    """
    bits = config.default_bits() if bits is None else bits
    lo_s, hi_s = f.support
    if ex_cmp(a, lo_s) < 0 or ex_cmp(b, hi_s) > 0 or ex_cmp(a, b) > 0:
        raise DomainError("integration bounds outside the support")
    if ex_cmp(a, b) == 0:
        return mpmath.mpf(0)
    with mpmath.workprec(bits + 16):
        if ex_cmp(b, 1) == 0:
            last = f.piece_index(Fraction(1))
            net = Fraction(0)
            for t in f.pieces[last]:
                if t.kind == RECIP_ONE_MINUS:
                    net = net + t.coeff
            if ex_cmp(net, 0) != 0:
                return mpmath.inf
        total = mpmath.mpf(0)
        bps = f.breakpoints
        for i, piece in enumerate(f.pieces):
            plo = a if ex_cmp(bps[i], a) < 0 else bps[i]
            phi = b if ex_cmp(bps[i + 1], b) > 0 else bps[i + 1]
            if ex_cmp(plo, phi) >= 0:
                continue
            xlo, xhi = to_mpf(plo, bits), to_mpf(phi, bits)
            one_minus_net = mpmath.mpf(0)
            for t in piece:
                c = to_mpf(t.coeff, bits)
                if t.kind == RECIP:
                    total += c * (mpmath.log(xhi) - mpmath.log(xlo))
                elif t.kind == RECIP_ONE_PLUS:
                    total += c * (mpmath.log(1 + xhi) - mpmath.log(1 + xlo))
                elif t.kind == RECIP_ONE_MINUS:
                    one_minus_net += c
                else:
                    s = to_mpf(t.shift, bits)
                    total += c * (mpmath.log(abs(xhi + s)) - mpmath.log(abs(xlo + s)))
            if one_minus_net:
                total += one_minus_net * (mpmath.log(1 - xlo) - mpmath.log(1 - xhi))
        return +total


def _entropy_primitive(kind: str, shift, x, bits: int):
    """Antiderivative of log(t) * basis(t) evaluated at x (mpf arithmetic)."""
    if kind == RECIP:
        return mpmath.log(x) ** 2 / 2
    if kind == RECIP_ONE_MINUS:
        return dilog_real(1 - x, bits)
    if kind == RECIP_ONE_PLUS:
        return dilog_real(-x, bits) + mpmath.log(x) * mpmath.log(1 + x)
    c = x / shift
    return mpmath.log(x) * mpmath.log(1 + c) + dilog_real(-c, bits)


def krengel_entropy(alpha, bits: int | None = None):
    """Entropy of the infinite invariant measure via the log-derivative
    integral -2 * int log(x) f(x) dx, evaluated in closed form through
    dilogarithms.  Equals pi^2/6 for alpha <= g."""
    bits = config.default_bits() if bits is None else bits
    f = density(alpha)
    with mpmath.workprec(bits + 16):
        total = mpmath.mpf(0)
        bps = f.breakpoints
        for i, piece in enumerate(f.pieces):
            xlo = to_mpf(bps[i], bits + 16)
            xhi = to_mpf(bps[i + 1], bits + 16)
            for t in piece:
                c = to_mpf(t.coeff, bits + 16)
                s = to_mpf(t.shift, bits + 16) if t.shift is not None else None
                total += c * (_entropy_primitive(t.kind, s, xhi, bits)
                              - _entropy_primitive(t.kind, s, xlo, bits))
        return +(-2 * total)


def krengel_entropy_quadrature(alpha, bits: int | None = None):
    """Same integral by adaptive quadrature (tanh-sinh), as a cross-check.

    The integrand -2 log(x) f(x) stays bounded at x = 1: the log zero
    cancels the 1/(1-x) pole, so endpoint quadrature converges cleanly.
    """
    bits = config.default_bits() if bits is None else bits
    f = density(alpha)
    with mpmath.workprec(bits + 16):
        total = mpmath.mpf(0)
        bps = f.breakpoints
        for i, piece in enumerate(f.pieces):
            xlo = to_mpf(bps[i], bits + 16)
            xhi = to_mpf(bps[i + 1], bits + 16)
            shifts = [(t.kind, to_mpf(t.coeff, bits + 16),
                       to_mpf(t.shift, bits + 16) if t.shift is not None else None)
                      for t in piece]

            def fx(x, shifts=shifts):
                val = mpmath.mpf(0)
                for kind, c, s in shifts:
                    if kind == RECIP:
                        val += c / x
                    elif kind == RECIP_ONE_PLUS:
                        val += c / (1 + x)
                    elif kind == RECIP_ONE_MINUS:
                        val += c / (1 - x)
                    else:
                        val += c / (x + s)
                return -2 * mpmath.log(x) * val

            total += mpmath.quad(fx, [xlo, xhi])
        return +total


def wandering_constant_of(f: PiecewiseDensity):
    """Coefficient of the 1/(1-x) singularity at 1 (all other terms stay
    bounded there); linear in the density normalisation."""
    return f.singular_coefficient_at_one()


def wandering_constant(alpha):
    return wandering_constant_of(density(alpha))


@dataclass(frozen=True)
class AsymptoticRates:
    constant: ExactReal
    wandering: str
    return_sequence: str


def asymptotics(alpha) -> AsymptoticRates:
    """Symbolic wandering rate c*log n and return sequence n/(c*log n)."""
    c = wandering_constant(alpha)
    if ex_cmp(c, 1) == 0:
        return AsymptoticRates(c, "log n", "n/log n")
    cs = format_exact(c)
    return AsymptoticRates(c, f"{cs}*log n", f"n/({cs}*log n)")


@dataclass
class BirkhoffStats:
    alpha: float
    n: int
    samples: int
    seed: int
    target: float
    mean: float
    median: float
    spread: float
    values: list[float]


def birkhoff_demo(alpha, n: int, samples: int = 50,
                  seed: int = 0) -> BirkhoffStats:
    """Normalised Birkhoff sums (log n / n) * sum 1_Y(T^k x) for the finite
    window Y = [min(a,1-a), 1/(1+a)], against the window mass.

    Demonstration only: convergence is in measure and slow, so no tight
    tolerance is attached.
    """
    if n < 10:
        raise DomainError("n must be >= 10")
    alpha = Alpha.of(alpha)
    a = alpha.value
    f = density(alpha)
    y_hi = 1 / (1 + a)
    target = float(integrate(f, alpha.left, y_hi))
    lo_f, hi_f = float(alpha.left), 1.0
    y_hi_f = float(y_hi)
    rng = random.Random(seed)
    af = float(a)
    import math as _math

    values = []
    norm = _math.log(n) / n
    for _ in range(samples):
        x = lo_f + (hi_f - lo_f) * rng.random()
        count = 0
        for _k in range(n):
            if lo_f <= x <= y_hi_f:
                count += 1
            t = 1.0 / x
            m = _math.floor(t)
            frac = t - m
            x = (m + 1) - t if frac <= af else frac
        values.append(norm * count)
    return BirkhoffStats(
        alpha=float(a), n=n, samples=samples, seed=seed, target=target,
        mean=statistics.fmean(values), median=statistics.median(values),
        spread=statistics.pstdev(values), values=values)
