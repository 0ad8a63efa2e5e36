"""Command-line interface.

Data goes to stdout (JSON by default), logs to stderr.  Exit codes:
1 usage, 2 domain error, 3 precision undecidable, 4 verification failure.
Identical invocations (including --seed) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import config
from .cf import convergents, semiregular_expand, tower_value
from .errors import (CfdynError, DomainError, EmptyWindowError,
                     PrecisionError, VerificationError)
from .exactreal import ex_cmp, ex_sign, format_exact, is_exact_tag, parse_exact
from .maps import Alpha, branches, digit, orbit, t_alpha
from .matching import (detect_matching, enumerate_windows, scan_parameters,
                       windows_to_csv, windows_to_json)
from .measure import (density, integrate, krengel_entropy,
                      krengel_entropy_quadrature, transfer_apply,
                      wandering_constant)
from .natext import explicit_domain, region_to_json, simulate
from .surd import INV_SQRT2

EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_bytes(data: bytes, path: str | None):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _fmt_number(x, digits: int = 15):
    if is_exact_tag(x):
        return format_exact(x)
    return repr(float(x))


def cmd_expand(args) -> int:
    alpha = Alpha(parse_exact(args.alpha))
    x = parse_exact(args.x)
    word = semiregular_expand(x, alpha, args.n)
    tr = orbit(x, alpha, args.n)
    cs = convergents(word)
    residuals = []
    for n in range(1, len(word.digits) + 1):
        prefix = type(word)(word.digits[:n])
        tail_pt = tr.steps[n - 1][0]
        sd = tr.steps[n - 1][1]
        tail = sd.eps * (1 / tail_pt - sd.d)
        res = tower_value(prefix, tail) - x
        residuals.append(_fmt_number(res))
    payload = {
        "alpha": args.alpha,
        "x": args.x,
        "digits": [str(sd) for sd in word.digits],
        "convergents": [[c.p, c.q] for c in cs],
        "truncation_residuals": residuals,
        "hit_one_at": tr.hit_one_at,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return 0


def cmd_match(args) -> int:
    alpha_val = parse_exact(args.alpha)
    res = detect_matching(alpha_val, max_steps=args.max_steps,
                          tolerance=args.tolerance)
    payload = {
        "alpha": args.alpha,
        "matched": res.matched,
        "M": res.M,
        "N": res.N,
        "common_value": None if res.common_value is None
        else _fmt_number(res.common_value),
        "steps_used": res.steps_used,
        "mode": res.mode,
        "tolerance": res.tolerance,
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return 0


def cmd_windows(args) -> int:
    wins = enumerate_windows(args.max_denominator)
    text = windows_to_csv(wins) if args.format == "csv" else windows_to_json(wins)
    _emit(text, args.output)
    return 0


def cmd_density(args) -> int:
    alpha = Alpha(parse_exact(args.alpha))
    f = density(alpha)
    if args.format == "csv":
        _emit(f.sample_csv(args.samples), args.output)
        return 0
    payload = {"alpha": args.alpha, "pieces": json.loads(f.to_json())}
    if args.x is not None:
        x = parse_exact(args.x)
        payload["value_at"] = {"x": args.x, "f": _fmt_number(f.eval(x))}
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return 0


def cmd_entropy(args) -> int:
    import mpmath

    alpha = Alpha(parse_exact(args.alpha))
    bits = args.precision_bits
    h = krengel_entropy(alpha, bits)
    payload = {
        "alpha": args.alpha,
        "closed_form": mpmath.nstr(h, 20),
        "pi2_over_6": mpmath.nstr(mpmath.pi ** 2 / 6, 20),
    }
    if args.quadrature:
        payload["quadrature"] = mpmath.nstr(krengel_entropy_quadrature(alpha, bits), 20)
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.output)
    return 0


def cmd_natext(args) -> int:
    cloud = simulate(float(parse_exact(args.alpha)), args.points,
                     burn_in=args.burn_in, seed=args.seed)
    if args.format == "ppm":
        if not args.output:
            print("warning: writing binary PPM to stdout", file=sys.stderr)
        _emit_bytes(cloud.to_ppm(resolution=args.resolution), args.output)
        return 0
    _emit(cloud.to_csv(), args.output)
    return 0


def cmd_scan(args) -> int:
    rep = scan_parameters(args.samples, max_steps=args.max_steps,
                          tolerance=args.tolerance, seed=args.seed)
    text = rep.to_csv() if args.format == "csv" else rep.to_json()
    _emit(text, args.output)
    return 0


def _verify_checks(alpha: Alpha, bits: int):
    """Invariant suite for one parameter; yields (name, ok, detail)."""
    import random

    a = alpha.value
    exact = is_exact_tag(a)
    rng = random.Random(20)

    def rand_rational():
        q = rng.randint(5, 400)
        lof = float(alpha.left)
        p = rng.randint(int(lof * q) + 1, q)
        return Fraction(p, q)

    ok_branch = True
    for _ in range(500):
        x = rand_rational()
        if not alpha.contains(x):
            continue
        sd = digit(x, alpha)
        if sd.d + sd.eps < 1 or (sd.eps == -1 and sd.d < 2):
            ok_branch = False
        y = t_alpha(x, alpha)
        if sd.eps * (1 / x - sd.d) != y:
            ok_branch = False
        if ex_cmp(y, alpha.left) < 0 or ex_cmp(y, 1) > 0:
            ok_branch = False
    yield "branch-identity-digit-legality-range", ok_branch, "500 rationals"

    ok_term = True
    for q in range(2, 31):
        for p in range(1, q + 1):
            x = Fraction(p, q)
            if x != 1 and (not alpha.contains(x)):
                continue
            tr = orbit(x, alpha, q + 1, stop_at_one=True)
            if tr.hit_one_at is None:
                ok_term = False
    yield "rational-termination", ok_term, "q <= 30 within q steps"

    if ex_cmp(a, INV_SQRT2) < 0:
        f = density(alpha)
        lo, hi = f.support
        bad = 0
        checked = 0
        for i in range(1, 51):
            x = lo + (hi - lo) * Fraction(2 * i - 1, 102)
            try:
                lhs = transfer_apply(f, alpha, x)
                rhs = f.eval(x, strict=True)
            except CfdynError:
                continue
            checked += 1
            if exact and isinstance(lhs - rhs, (int, Fraction)) \
                    and ex_sign(lhs - rhs) != 0:
                bad += 1
            elif abs(float(lhs - rhs)) > 1e-10 * abs(float(rhs)):
                bad += 1
        yield "transfer-fixed-point", bad == 0, f"{checked} grid points"

        reg = explicit_domain(alpha)
        bad = 0
        for i in range(1, 51):
            x = lo + (hi - lo) * Fraction(2 * i - 1, 102)
            try:
                if ex_sign(reg.fiber_integral(x) - f.eval(x)) != 0:
                    bad += 1
            except CfdynError:
                continue
        yield "fiber-density-consistency", bad == 0, "50 fibers"

        finite = integrate(f, alpha.left, 1 - Fraction(1, 10 ** 6), bits)
        import mpmath

        tail = integrate(f, 1 - Fraction(1, 10 ** 6), Fraction(1), bits)
        yield ("sigma-finiteness", bool(mpmath.isfinite(finite))
               and tail == mpmath.inf, "mass split at 1 - 1e-6")

        c = wandering_constant(alpha)
        yield "wandering-constant", ex_cmp(c, 1) == 0, format_exact(c)

    res = detect_matching(a if exact else float(a), max_steps=400)
    if res.matched and res.mode == "exact":
        lhs = orbit(a, alpha, res.M + 1).points()[res.M]
        rhs = orbit(1 - a, alpha, res.N + 1).points()[res.N]
        yield "matching-reverified", ex_cmp(lhs, rhs) == 0, f"(M,N)=({res.M},{res.N})"
    else:
        yield "matching", res.matched, f"mode={res.mode}"


def cmd_verify(args) -> int:
    alpha = Alpha(parse_exact(args.alpha))
    results = []
    failed = False
    for name, ok, detail in _verify_checks(alpha, args.precision_bits):
        results.append({"check": name, "ok": bool(ok), "detail": detail})
        print(f"[{'pass' if ok else 'FAIL'}] {name} ({detail})", file=sys.stderr)
        failed = failed or not ok
    _emit(json.dumps({"alpha": args.alpha, "checks": results,
                      "ok": not failed}, sort_keys=True, indent=2), args.output)
    if failed:
        raise VerificationError(f"verification failed for alpha={args.alpha}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cfdyn",
                     description="flipped continued-fraction dynamics toolkit")
    parser.add_argument("--precision-bits", type=int,
                        default=config.default_bits(),
                        help="working precision for high-precision results")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="signed-digit expansion of x")
    p.add_argument("--alpha", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("match", help="matching exponents for one parameter")
    p.add_argument("--alpha", required=True)
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--output")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("windows", help="maximal matching windows")
    p.add_argument("--max-denominator", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_windows)

    p = sub.add_parser("density", help="invariant density")
    p.add_argument("--alpha", required=True)
    p.add_argument("--x", help="evaluate the density at this point")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("entropy", help="Krengel entropy")
    p.add_argument("--alpha", required=True)
    p.add_argument("--quadrature", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("natext", help="simulate the planar extension")
    p.add_argument("--alpha", required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--format", choices=("csv", "ppm"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=cmd_natext)

    p = sub.add_parser("scan", help="parameter-space matching scan")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run the invariant suite for alpha")
    p.add_argument("--alpha", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PrecisionError as exc:
        print(f"precision undecidable: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, EmptyWindowError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CfdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
