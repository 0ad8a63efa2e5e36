"""Planar natural-extension machinery.

The two-dimensional map acts as (x, y) -> (T(x), eps/(d+y)) and preserves
dA/(1+xy)^2 on an explicit union of axis-aligned boxes (parameters below
sqrt(2)/2; beyond that only simulation is offered).  Box layouts per regime
are chosen so that integrating the invariant plane measure along each fiber
reproduces the one-dimensional density; that identity is a test, not an
assumption.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, FiberAmbiguityError
from .exactreal import ExactReal, ex_cmp, ex_sign, format_exact
from .maps import Alpha, SignedDigit, branches, digit, t_alpha
from .measure import PiecewiseDensity, density
from .surd import GOLDEN_G, INV_SQRT2

INF = math.inf


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; y_hi may be None for an unbounded fiber top."""

    x_lo: ExactReal
    x_hi: ExactReal
    y_lo: ExactReal
    y_hi: ExactReal | None

    def as_floats(self) -> tuple[float, float, float, float]:
        top = INF if self.y_hi is None else float(self.y_hi)
        return float(self.x_lo), float(self.x_hi), float(self.y_lo), top


@dataclass
class Region:
    """Finite union of boxes with disjoint interiors covering I_alpha."""

    alpha_value: ExactReal
    boxes: list[Box]
    _float_boxes: list[tuple[float, float, float, float]] = field(default=None, repr=False)

    def __post_init__(self):
        self._float_boxes = [b.as_floats() for b in self.boxes]

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        for xl, xh, yl, yh in self._float_boxes:
            if xl - tol <= x <= xh + tol and y >= yl - tol and y <= yh + tol:
                return True
        return False

    def membership(self, xs: np.ndarray, ys: np.ndarray,
                   tol: float = 0.0) -> np.ndarray:
        ok = np.zeros(len(xs), dtype=bool)
        for xl, xh, yl, yh in self._float_boxes:
            band = (xs >= xl - tol) & (xs <= xh + tol) & (ys >= yl - tol)
            if yh != INF:
                band &= ys <= yh + tol
            ok |= band
        return ok

    def contains_exact(self, x, y) -> bool:
        for b in self.boxes:
            if ex_cmp(x, b.x_lo) < 0 or ex_cmp(x, b.x_hi) > 0:
                continue
            if ex_cmp(y, b.y_lo) < 0:
                continue
            if b.y_hi is None or ex_cmp(y, b.y_hi) <= 0:
                return True
        return False

    def fiber_boxes(self, x) -> list[Box]:
        """Boxes whose open x-extent contains x (x must avoid box edges)."""
        out = []
        for b in self.boxes:
            c_lo, c_hi = ex_cmp(x, b.x_lo), ex_cmp(x, b.x_hi)
            if c_lo == 0 or c_hi == 0:
                raise DomainError(f"{x!r} sits on a box edge; perturb the grid")
            if c_lo > 0 and c_hi < 0:
                out.append(b)
        return out

    def fiber_integral(self, x):
        """Exact integral of 1/(1+xy)^2 over the fiber above x.

        A fiber [c, e] contributes (1/x)(1/(1+xc) - 1/(1+xe)); unbounded
        tops drop the second term.
        """
        total = Fraction(0)
        for b in self.fiber_boxes(x):
            part = 1 / (x * (1 + x * b.y_lo))
            if b.y_hi is not None:
                part = part - 1 / (x * (1 + x * b.y_hi))
            total = total + part
        return total


def explicit_domain(alpha) -> Region:
    """The invariant box union for alpha < sqrt(2)/2 (error beyond)."""
    alpha = Alpha.of(alpha)
    a = alpha.value
    if ex_cmp(a, INV_SQRT2) >= 0:
        raise DomainError("explicit domains exist only for alpha < sqrt(2)/2")
    one = Fraction(1)
    zero = Fraction(0)
    minus1 = Fraction(-1)
    g = GOLDEN_G
    boxes: list[Box] = []

    def add(xl, xh, yl, yh):
        if ex_cmp(xl, xh) < 0:
            boxes.append(Box(xl, xh, yl, yh))

    if ex_cmp(a, Fraction(1, 2)) < 0:
        ratio = a / (1 - a)
        if ex_cmp(ratio, 1 - a) <= 0:
            add(a, ratio, zero, None)
            add(ratio, 1 - a, zero, one)
            add(1 - a, one, minus1, one)
        else:
            add(a, 1 - a, zero, None)
            add(1 - a, ratio, minus1, None)
            add(ratio, one, minus1, one)
    elif ex_cmp(a, g) < 0:
        ratio = (1 - a) / a
        add(1 - a, a, minus1, zero)
        add(a, ratio, minus1, None)
        add(ratio, one, minus1, zero)
        add(ratio, one, one, None)
    elif ex_cmp(a, Fraction(2, 3)) < 0:
        h1 = (2 * a - 1) / a
        h3 = (2 * a - 1) / (1 - a)
        add(1 - a, h1, minus1, g - 1)
        add(h1, a, minus1, zero)
        add(a, h3, minus1, zero)
        add(a, h3, g, None)
        add(h3, one, minus1, zero)
        add(h3, one, one, None)
    else:
        h1 = (2 * a - 1) / a
        h3 = (1 - a) / (2 * a - 1)
        add(1 - a, h1, minus1, g - 1)
        add(h1, a, minus1, zero)
        add(a, h3, minus1, zero)
        add(a, h3, g, None)
        add(h3, one, minus1, zero)
        add(h3, one, g, one)
        add(h3, one, g + 1, None)
    return Region(a, boxes)


# ---------------------------------------------------------------------------
# the planar map


def ne_map(point, alpha):
    """(x, y) -> (T(x), eps/(d+y)); y = +inf is sent to 0 in the fiber."""
    alpha = Alpha.of(alpha)
    x, y = point
    sd = digit(x, alpha)
    new_x = sd.eps * (1 / x - sd.d)
    if y == INF:
        new_y = Fraction(0)
    else:
        new_y = sd.eps / (sd.d + y)
    return (new_x, new_y)


def ne_inverse(point, alpha, region: Region | None = None):
    """Left inverse of ne_map on the explicit domain.

    The branch (eps, d) is read from the fiber: eps = sign(y), and d is the
    unique shift for which both the x-preimage lands in its cylinder and
    the y-preimage lands in the domain fiber.
    """
    alpha = Alpha.of(alpha)
    if region is None:
        region = explicit_domain(alpha)
    x1, y1 = point
    if y1 == INF:
        raise FiberAmbiguityError("y = inf is not in the image of a fiber point")
    s = ex_sign(y1)
    if s == 0:
        raise FiberAmbiguityError("y = 0 is a fiber boundary (preimage y = inf)")
    eps = s
    v = eps / y1
    cands = []
    for d in range(1 if eps > 0 else 2, alpha.max_branch_digit + 1):
        y0 = v - d
        if ex_cmp(y0, -1) < 0:
            continue
        x0 = 1 / (d + eps * x1)
        if not alpha.contains(x0):
            continue
        if digit(x0, alpha) != SignedDigit(eps, d):
            continue
        if not region.contains_exact(x0, y0):
            continue
        cands.append((x0, y0))
    if ex_cmp(x1, 1) == 0 and len(cands) > 1:
        fixed = [c for c in cands if ex_cmp(c[0], 1) == 0]
        if len(fixed) == 1:
            return fixed[0]  # the indifferent branch owns the corner
    if len(cands) != 1:
        raise FiberAmbiguityError(
            f"{point!r}: {len(cands)} branch candidates (boundary point?)")
    return cands[0]


# ---------------------------------------------------------------------------
# simulation


@dataclass
class PointCloud:
    xs: np.ndarray
    ys: np.ndarray
    alpha: float
    seed: int
    burn_in: int
    requested: int
    restarts: int

    def __len__(self):
        return len(self.xs)

    def to_csv(self) -> str:
        lines = [f"# alpha={self.alpha!r} seed={self.seed} burn_in={self.burn_in}",
                 "x,y"]
        for x, y in zip(self.xs, self.ys):
            lines.append(f"{x!r},{y!r}")
        return "\n".join(lines) + "\n"

    def to_ppm(self, resolution: int = 512, y_min: float = -1.0,
               y_max: float = 3.0) -> bytes:
        """Square binary PPM raster: linear binning, max-count normalised."""
        x_min = float(min(self.alpha, 1.0 - self.alpha))
        counts = np.zeros((resolution, resolution), dtype=np.int64)
        xs, ys = self.xs, self.ys
        keep = (ys >= y_min) & (ys <= y_max)
        xi = ((xs[keep] - x_min) / (1.0 - x_min) * (resolution - 1)).astype(int)
        yi = ((ys[keep] - y_min) / (y_max - y_min) * (resolution - 1)).astype(int)
        np.clip(xi, 0, resolution - 1, out=xi)
        np.clip(yi, 0, resolution - 1, out=yi)
        np.add.at(counts, (resolution - 1 - yi, xi), 1)
        peak = counts.max() if counts.max() > 0 else 1
        img = (counts * 255 // peak).astype(np.uint8)
        header = f"P6 {resolution} {resolution} 255\n".encode()
        rgb = np.repeat(img[:, :, None], 3, axis=2)
        return header + rgb.tobytes()


def _sim_step(x: float, y: float, a: float) -> tuple[float, float]:
    t = 1.0 / x
    n = math.floor(t)
    f = t - n
    if f <= a:
        return (n + 1) - t, -1.0 / (n + 1 + y)
    return f, 1.0 / (n + y)


def simulate(alpha: float, n_points: int, burn_in: int = 1000,
             seed: int = 0, start: tuple[float, float] | None = None) -> PointCloud:
    """Iterate the planar map in double precision and collect a cloud.

    Works for every alpha in (0, 1), including the regime without explicit
    domains.  Orbits that land exactly on the fixed point restart from a
    fresh random state (counted in `restarts`).
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0,1)")
    if n_points < 0:
        raise DomainError("n_points must be >= 0")
    rng = random.Random(seed)
    lo = min(alpha, 1.0 - alpha)

    def fresh_start():
        if start is not None:
            return float(start[0]), float(start[1])
        return lo + (1.0 - lo) * rng.random(), 0.0

    x, y = fresh_start()
    restarts = 0
    xs = np.empty(n_points)
    ys = np.empty(n_points)
    filled = 0
    step = 0
    while filled < n_points:
        if x >= 1.0 or x <= 0.0 or x != x:
            restarts += 1
            x, y = lo + (1.0 - lo) * rng.random(), 0.0
        x, y = _sim_step(x, y, alpha)
        step += 1
        if step > burn_in:
            xs[filled] = x
            ys[filled] = y
            filled += 1
    return PointCloud(xs, ys, alpha, seed, burn_in, n_points, restarts)


# ---------------------------------------------------------------------------
# Monte Carlo invariance check


def nu_box_exact(x0: float, x1: float, y0: float, y1: float) -> float:
    """Closed-form plane measure of a box (y1 may be inf)."""
    if y1 == INF:
        def prim(x):
            return math.log(x) - math.log(1.0 + y0 * x)
    else:
        def prim(x):
            return math.log(1.0 + y1 * x) - math.log(1.0 + y0 * x)
    return prim(x1) - prim(x0)


def _nu_mc(x0, x1, y0, y1, n, rng: np.random.Generator):
    """MC estimate (value, stderr) of the plane measure of one box."""
    xs = rng.uniform(x0, x1, n)
    if y1 == INF:
        u = rng.uniform(0.0, 1.0, n)
        u = np.maximum(u, 1e-300)
        ys = y0 + (1.0 - u) / u
        w = (x1 - x0) / (u * (1.0 + xs * ys)) ** 2
        # du/u^2 substitution flattens the unbounded fiber to (0, 1]
    else:
        ys = rng.uniform(y0, y1, n)
        w = (x1 - x0) * (y1 - y0) / (1.0 + xs * ys) ** 2
    return float(w.mean()), float(w.std(ddof=1) / math.sqrt(n))


def preimage_rectangles(alpha, rect, region: Region | None = None):
    """T^{-1} of an axis-aligned rectangle, as exact rectangles inside the
    domain (one per contributing branch and box overlap)."""
    alpha = Alpha.of(alpha)
    if region is None:
        region = explicit_domain(alpha)
    a, b, c, d = (Fraction(v) for v in rect)
    out = []
    for br in branches(alpha):
        eps, dd = br.sd.eps, br.sd.d
        if eps > 0:
            xlo, xhi = 1 / (dd + b), 1 / (dd + a)
            yc = c if ex_cmp(c, 0) > 0 else None
            if ex_cmp(d, 0) <= 0:
                continue
            y_lo = (1 / d) - dd
            y_hi = None if yc is None else (1 / yc) - dd
        else:
            if ex_cmp(c, 0) >= 0:
                continue
            dn = d if ex_cmp(d, 0) < 0 else None
            xlo, xhi = 1 / (dd - a), 1 / (dd - b)
            y_lo = (-1 / c) - dd
            y_hi = None if dn is None else (-1 / dn) - dd
        xlo = br.left if ex_cmp(xlo, br.left) < 0 else xlo
        xhi = br.right if ex_cmp(xhi, br.right) > 0 else xhi
        if ex_cmp(xlo, xhi) >= 0:
            continue
        if ex_cmp(y_lo, -1) < 0:
            y_lo = Fraction(-1)
        for box in region.boxes:
            bx_lo = box.x_lo if ex_cmp(xlo, box.x_lo) < 0 else xlo
            bx_hi = box.x_hi if ex_cmp(xhi, box.x_hi) > 0 else xhi
            if ex_cmp(bx_lo, bx_hi) >= 0:
                continue
            by_lo = box.y_lo if ex_cmp(y_lo, box.y_lo) < 0 else y_lo
            if y_hi is None:
                by_hi = box.y_hi
            elif box.y_hi is None:
                by_hi = y_hi
            else:
                by_hi = box.y_hi if ex_cmp(y_hi, box.y_hi) > 0 else y_hi
            if by_hi is not None and ex_cmp(by_lo, by_hi) >= 0:
                continue
            out.append((bx_lo, bx_hi, by_lo, by_hi))
    return out


def measure_check(alpha, rectangles, mc_samples: int = 10 ** 6,
                  seed: int = 0) -> list[dict]:
    """Monte Carlo comparison of nu(A) against nu(T^{-1} A) per rectangle.

    Each entry reports both estimates with standard errors and flags
    |difference| > 3 sigma.
    """
    alpha = Alpha.of(alpha)
    region = explicit_domain(alpha)
    rng = np.random.default_rng(seed)
    report = []
    for rect in rectangles:
        x0, x1, y0, y1 = (float(v) for v in rect)
        nu_a, se_a = _nu_mc(x0, x1, y0, y1, mc_samples, rng)
        pieces = preimage_rectangles(alpha, rect, region)
        per_piece = max(2000, mc_samples // max(1, len(pieces)))
        nu_p, var_p = 0.0, 0.0
        for (plo, phi, qlo, qhi) in pieces:
            v, se = _nu_mc(float(plo), float(phi), float(qlo),
                           INF if qhi is None else float(qhi), per_piece, rng)
            nu_p += v
            var_p += se * se
        se_p = math.sqrt(var_p)
        sigma = math.hypot(se_a, se_p)
        diff = abs(nu_a - nu_p)
        report.append({
            "rect": [x0, x1, y0, y1],
            "nu": nu_a, "nu_se": se_a,
            "nu_preimage": nu_p, "nu_preimage_se": se_p,
            "diff": diff, "sigma": sigma,
            "within_3_sigma": bool(diff <= 3.0 * sigma or diff < 1e-12),
        })
    return report


def region_to_json(region: Region) -> str:
    import json

    return json.dumps([{
        "x_lo": format_exact(b.x_lo), "x_hi": format_exact(b.x_hi),
        "y_lo": format_exact(b.y_lo),
        "y_hi": None if b.y_hi is None else format_exact(b.y_hi),
    } for b in region.boxes], sort_keys=True, indent=2)
