"""The interval maps: Gauss G, Renyi R = 1 - G, the flipped family T_alpha,
the folded variant and Nakada's family, with digit and cylinder bookkeeping.

T_alpha acts on I_alpha = [min(alpha, 1-alpha), 1].  It applies G off the
flip region D_alpha = union_n [1/(n+alpha), 1/n] and R on it.  Membership in
D_alpha reduces to frac(1/x) <= alpha, which is how every predicate below is
implemented.  Boundary points (both interval ends, closed) flip; that
convention makes the digit total on I_alpha and sends every 1/n to the
indifferent fixed point 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PrecisionError
from .exactreal import ExactReal, ex_cmp, ex_floor, ex_sign, is_exact_tag, parse_exact


@dataclass(frozen=True)
class SignedDigit:
    """One semi-regular step (eps, d): eps in {-1,+1}, d >= 1, d + eps >= 1."""

    eps: int
    d: int

    def __post_init__(self):
        if self.eps not in (-1, 1):
            raise DomainError(f"sign must be +-1, got {self.eps}")
        if self.d < 1 or self.d + self.eps < 1:
            raise DomainError(f"illegal digit ({self.eps:+d}, {self.d})")

    def __str__(self):
        return f"{self.eps:+d}/{self.d}"


class Alpha:
    """Parameter alpha in (0, 1) with its derived constants cached."""

    __slots__ = ("value", "left", "max_branch_digit")

    def __init__(self, value):
        if isinstance(value, str):
            value = parse_exact(value)
        if isinstance(value, (int, float)):
            value = Fraction(value)
        if ex_cmp(value, 0) <= 0 or ex_cmp(value, 1) >= 0:
            raise DomainError("alpha must lie strictly inside (0, 1)")
        self.value = value
        one_minus = 1 - value
        self.left = value if ex_cmp(value, one_minus) <= 0 else one_minus
        self.max_branch_digit = ex_floor(1 / self.left) + 2

    @classmethod
    def of(cls, value) -> "Alpha":
        return value if isinstance(value, Alpha) else cls(value)

    def contains(self, x) -> bool:
        return ex_cmp(x, self.left) >= 0 and ex_cmp(x, 1) <= 0

    def __repr__(self):
        return f"Alpha({self.value!r})"


def _check_domain(x, alpha: Alpha):
    if not alpha.contains(x):
        raise DomainError(f"{x!r} outside I_alpha for alpha={alpha.value!r}")


def in_flip_region(x, alpha) -> bool:
    """True iff x lies in some closed interval [1/(n+alpha), 1/n], n >= 1."""
    alpha = Alpha.of(alpha)
    if ex_cmp(x, 0) <= 0 or ex_cmp(x, 1) > 0:
        raise DomainError("x must lie in (0, 1]")
    t = 1 / x
    return ex_cmp(t - ex_floor(t), alpha.value) <= 0


def digit(x, alpha) -> SignedDigit:
    """First signed digit of x under T_alpha; x = 1 yields (-1, 2)."""
    alpha = Alpha.of(alpha)
    _check_domain(x, alpha)
    t = 1 / x
    n = ex_floor(t)
    if ex_cmp(t - n, alpha.value) <= 0:
        return SignedDigit(-1, n + 1)
    return SignedDigit(1, n)


def t_alpha(x, alpha):
    """One step of the flipped map: eps(x) * (1/x - d(x))."""
    alpha = Alpha.of(alpha)
    sd = digit(x, alpha)
    return sd.eps * (1 / x - sd.d)


def gauss(x):
    """G(x) = 1/x mod 1 on (0, 1]."""
    if ex_cmp(x, 0) <= 0 or ex_cmp(x, 1) > 0:
        raise DomainError("gauss needs x in (0, 1]")
    t = 1 / x
    return t - ex_floor(t)


def renyi(x):
    """R(x) = 1 - G(x) on (0, 1]."""
    return 1 - gauss(x)


def folded(x, alpha):
    """|1/x - floor(1/x + 1 - alpha)| on [0, max(alpha, 1-alpha)]; 0 -> 0."""
    alpha = Alpha.of(alpha)
    hi = alpha.value if ex_cmp(alpha.value, 1 - alpha.value) >= 0 else 1 - alpha.value
    if ex_cmp(x, 0) < 0 or ex_cmp(x, hi) > 0:
        raise DomainError("x outside the folded map domain")
    if ex_cmp(x, 0) == 0:
        return Fraction(0)
    t = 1 / x
    y = t - ex_floor(t + 1 - alpha.value)
    return y if ex_sign(y) >= 0 else -y


def nakada(x, alpha):
    """|1/x| - floor(|1/x| + 1 - alpha) on [alpha-1, alpha]; 0 -> 0."""
    alpha = Alpha.of(alpha)
    if ex_cmp(x, alpha.value - 1) < 0 or ex_cmp(x, alpha.value) > 0:
        raise DomainError("x outside the Nakada map domain")
    if ex_cmp(x, 0) == 0:
        return Fraction(0)
    t = 1 / x
    a = t if ex_sign(t) >= 0 else -t
    return a - ex_floor(a + 1 - alpha.value)


@dataclass(frozen=True)
class BranchInfo:
    """One monotonicity branch: its digit and cylinder within I_alpha."""

    sd: SignedDigit
    left: ExactReal
    right: ExactReal


def branches(alpha) -> list[BranchInfo]:
    """Cylinders of T_alpha on I_alpha, left to right, partitioning it."""
    alpha = Alpha.of(alpha)
    a = alpha.value
    out = []
    for n in range(1, alpha.max_branch_digit + 1):
        flip_l = 1 / (n + a)
        flip_r = Fraction(1, n)
        pairs = ((SignedDigit(-1, n + 1), flip_l, flip_r),
                 (SignedDigit(1, n), Fraction(1, n + 1), flip_l))
        for sd, lo, hi in pairs:
            if ex_cmp(hi, alpha.left) <= 0:
                continue
            if ex_cmp(lo, alpha.left) < 0:
                lo = alpha.left
            if ex_cmp(lo, hi) < 0:
                out.append(BranchInfo(sd, lo, hi))
    out.sort(key=lambda b: float(b.left))
    return out


@dataclass
class Orbit:
    """Trace of (point, digit) pairs; `hit_one_at` marks the first exact 1."""

    steps: list[tuple[ExactReal, SignedDigit]]
    hit_one_at: int | None

    def points(self):
        return [p for p, _ in self.steps]

    def digits(self):
        return [sd for _, sd in self.steps]


def orbit(x, alpha, n: int, stop_at_one: bool = False) -> Orbit:
    """n steps of T_alpha starting at x; entry k traces T^k(x) and its digit.

    Exact inputs iterate exactly.  Reaching the indifferent fixed point is
    flagged (detectable only for exact tags); by default the trace keeps
    emitting the fixed point so the requested length is honoured.
    """
    alpha = Alpha.of(alpha)
    _check_domain(x, alpha)
    steps: list[tuple[ExactReal, SignedDigit]] = []
    hit = None
    point = x
    for k in range(n):
        try:
            sd = digit(point, alpha)
        except PrecisionError as exc:
            raise PrecisionError(f"orbit step {k}: {exc}", step=k) from exc
        steps.append((point, sd))
        if hit is None and is_exact_tag(point) and ex_cmp(point, 1) == 0:
            hit = k
            if stop_at_one:
                break
        point = sd.eps * (1 / point - sd.d)
    return Orbit(steps, hit)
