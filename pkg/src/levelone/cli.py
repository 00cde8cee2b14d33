"""Command-line front end: ``levelone <subcommand> [options]``.

Exit status is 0 on success, 1 when a check fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import bounds, certify, changdim, extremal
from .specfun import ProfileParams

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _vector(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from exc


def _csv_float(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{float(x):.17g}"


def _params(args) -> ProfileParams:
    T = 0.21 if args.T is None else args.T
    return ProfileParams.from_threshold(T, args.outer)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bounds(args) -> int:
    step = args.grid if args.grid is not None else (args.grid_step or 1e-3)
    if not 0 < step <= 0.5:
        raise UsageError(f"--grid {step} must lie in (0, 1/2]")
    count = int(math.floor(0.5 / step + 1e-9))
    grid = np.arange(1, count + 1) * step
    rep = bounds.bound_table(grid, _params(args), strong_n=args.strong_n, threads=args.threads)
    if args.format in (None, "csv"):
        _emit(args, rep.to_csv())
    else:
        lines = [f"points: {len(grid)}", f"columns: {', '.join(rep.column_names())}",
                 f"sandwich_ok: {str(rep.sandwich_ok).lower()}",
                 f"violations: {', '.join(f'{v:.17g}' for v in rep.violations)}"]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.sandwich_ok else EXIT_FAIL


def cmd_certify(args) -> int:
    step = args.grid_step or 1e-3
    if not 0 < step <= 1e-3:
        raise UsageError(f"--grid-step {step} must lie in (0, 1e-3]")
    rep = certify.verify_region(step, _params(args), threads=args.threads)
    _emit(args, rep.to_json() + "\n" if args.format == "json" else rep.to_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def _support_size(n: int, args) -> int:
    if (args.m is None) == (args.a is None):
        raise UsageError("give exactly one of m or --a")
    if args.m is not None:
        return args.m
    scaled = args.a * (1 << n)
    if scaled.denominator != 1:
        raise UsageError(f"--a {args.a} is not a multiple of 2^-{n}")
    return int(scaled)


def cmd_extremal(args) -> int:
    n = args.n
    kw = dict(cap=args.cap, allow_large=args.allow_large, threads=args.threads)
    if args.sweep:
        rows = []
        ok = True
        for m in range(0, (1 << n) + 1):
            res = extremal.exact_max_w1(n, m, **kw)
            ok &= all(res.self_consistent)
            rows.append(res)
        mono = extremal.is_strictly_increasing(
            [(r.m, r.max_w1) for r in rows if 1 <= r.m <= (1 << max(n - 1, 0))])
        ok &= mono
        if args.format == "json":
            _emit(args, json.dumps({"monotone": mono, "results": [r.to_dict() for r in rows]},
                                   indent=2) + "\n")
        else:
            lines = ["m,a,max_w1,max_w1_float,maximizers,self_consistent"]
            lines += [f"{r.m},{r.a},{r.max_w1},{_csv_float(r.max_w1_float)},{len(r.maximizers)},"
                      f"{str(all(r.self_consistent)).lower()}" for r in rows]
            _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK if ok else EXIT_FAIL
    m = _support_size(n, args)
    if args.ltf is not None:
        res = extremal.ltf_search(n, m, args.ltf)
        text = (f"n: {res.n}\nm: {res.m}\nw1: {res.w1}\nw1_float: {float(res.w1):.17g}\n"
                f"weights: {' '.join(map(str, res.weights))}\n"
                f"support: {' '.join(map(str, res.support))}\n")
        _emit(args, text)
        return EXIT_OK
    if args.beta is not None:
        res = extremal.exact_max_w1_given_beta(n, m, args.beta, **kw)
    else:
        res = extremal.exact_max_w1(n, m, **kw)
    _emit(args, res.to_json() + "\n" if args.format == "json" else res.to_text())
    return EXIT_OK if all(res.self_consistent) else EXIT_FAIL


def cmd_fkn(args) -> int:
    step = args.step
    if not 0 < step <= 0.5:
        raise UsageError(f"--step {step} must lie in (0, 1/2]")
    betas = [k * step for k in range(int(math.floor(0.5 / step + 1e-9)) + 1)]
    rows = bounds.fkn_table(betas, _params(args))
    lines = ["beta,fkn,khintchine,best"]
    lines += [f"{_csv_float(b)},{_csv_float(f)},{_csv_float(k)},{_csv_float(min(f, k))}"
              for b, f, k in rows]
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_chang(args) -> int:
    if args.sharp_eps:
        k, a = int(args.sharp_eps[0]), _fraction(args.sharp_eps[1])
        _emit(args, f"{changdim.sharp_eps(k, a)}\n")
    elif args.ball_eps:
        k, r = (int(v) for v in args.ball_eps)
        _emit(args, f"{changdim.ball_eps(k, r)}\n")
    elif args.bounds:
        a, eps = float(_fraction(args.bounds[0])), float(_fraction(args.bounds[1]))
        _emit(args, f"chang: {changdim.chang_dim_bound(a, eps):.17g}\n"
                    f"lemma6: {changdim.lemma6_bound(a, eps, _params(args)):.17g}\n")
    elif args.check is not None:
        eps = args.eps or [k / 10 for k in range(1, 10)]
        seed = 7 if args.seed is None else args.seed
        ok = changdim.exhaustive_dim_check(args.check, eps, seed=seed, params=_params(args),
                                           threads=args.threads)
        _emit(args, f"pass: {str(ok).lower()}\n")
        return EXIT_OK if ok else EXIT_FAIL
    else:
        raise UsageError("chang needs one of --sharp-eps, --ball-eps, --bounds, --check")
    return EXIT_OK


def cmd_euclid(args) -> int:
    center = args.center or [0.0] * args.dim
    if len(center) != args.dim:
        raise UsageError(f"--center has {len(center)} entries, expected {args.dim}")
    seed = 0 if args.seed is None else args.seed
    est = extremal.euclid_mc(args.dim, center, args.measure, args.samples, seed, args.threads)
    lines = [f"dim: {args.dim}", f"center: {','.join(f'{c:g}' for c in center)}",
             f"measure: {args.measure:.17g}", f"radius: {est.radius:.17g}",
             f"d2: {est.mean:.17g}", f"std_error: {est.std_error:.17g}",
             f"samples: {est.samples}", f"pairs: {est.pairs}", f"seed: {est.seed}"]
    status = EXIT_OK
    if not any(center):
        lines.append(f"d2_quadrature: {extremal.origin_ball_d2(args.dim, args.measure):.17g}")
    if args.compare is not None:
        if len(args.compare) != args.dim:
            raise UsageError(f"--compare has {len(args.compare)} entries, expected {args.dim}")
        other = extremal.euclid_mc(args.dim, args.compare, args.measure, args.samples, seed,
                                   args.threads)
        se = math.hypot(est.std_error, other.std_error)
        margin = (other.mean - est.mean) / se
        lines += [f"compare_center: {','.join(f'{c:g}' for c in args.compare)}",
                  f"compare_d2: {other.mean:.17g}", f"compare_std_error: {other.std_error:.17g}",
                  f"margin_in_std_errors: {margin:.6f}"]
        if margin <= 3.0:
            status = EXIT_FAIL
    _emit(args, "\n".join(lines) + "\n")
    return status


def cmd_asymptotics(args) -> int:
    p = _params(args)
    ts = args.t or [5.0, 10.0, 20.0, 40.0]
    lines = ["t,ln_chang,ln_J,ln_chi,expansion_J,expansion_chi,residual_J,residual_chi"]
    for t in ts:
        lc, lj, lx = bounds.log_asymptotics(t, p)
        base = -2.0 * t + math.log(2.0 * t)
        ej = base - math.log(2.0 * math.pi) / (2.0 * t)
        ex = base - math.log(2.0 * math.pi / p.w ** 2) / (2.0 * t)
        lines.append(",".join(_csv_float(v) for v in (t, lc, lj, lx, ej, ex, lj - ej, lx - ex)))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "report", "json"))
    common.add_argument("--seed", type=int)
    common.add_argument("--grid-step", type=_positive_float)
    common.add_argument("--threads", type=int, help="worker cap; results do not depend on it")
    common.add_argument("--T", type=_positive_float, help="profile threshold (default 0.21)")
    common.add_argument("--outer", choices=("half", "lp"), default="half",
                        help="bound used above the threshold")

    ap = argparse.ArgumentParser(prog="levelone", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="table of upper and lower bounds on W(a)")
    p.add_argument("--grid", type=_positive_float, help="density step (default 0.001)")
    p.add_argument("--strong-n", type=int, default=100)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("certify", parents=[common], help="grid check of the induction step")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("extremal", parents=[common], help="exact maximal level-1 weight")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--a", type=_fraction, help="density p/q instead of m")
    p.add_argument("--beta", type=_fraction, help="fix the largest coefficient magnitude")
    p.add_argument("--cap", type=int, default=extremal.MAX_CAP, help="maximizers to keep")
    p.add_argument("--allow-large", action="store_true", help="permit n > 4 (slow)")
    p.add_argument("--ltf", type=int, metavar="WEIGHT_CAP", help="threshold-function search")
    p.add_argument("--sweep", action="store_true", help="all m with monotonicity check")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("fkn", parents=[common], help="bounds on W(1/2, beta)")
    p.add_argument("--step", type=_positive_float, default=1 / 64)
    p.set_defaults(func=cmd_fkn)

    p = sub.add_parser("chang", parents=[common], help="large-spectrum dimension bounds")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sharp-eps", nargs=2, metavar=("K", "A"))
    g.add_argument("--ball-eps", nargs=2, metavar=("K", "R"))
    g.add_argument("--bounds", nargs=2, metavar=("A", "EPS"))
    g.add_argument("--check", type=int, metavar="N")
    p.add_argument("--eps", type=_vector, help="comma-separated eps grid for --check")
    p.set_defaults(func=cmd_chang)

    p = sub.add_parser("euclid-mc", parents=[common], help="Monte-Carlo average distance of Gaussian balls")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--center", type=_vector)
    p.add_argument("--measure", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--compare", type=_vector, help="second center; fails unless it has larger D^2")
    p.set_defaults(func=cmd_euclid)

    p = sub.add_parser("asymptotics", parents=[common], help="log-scale bounds at a = e^-t")
    p.add_argument("--t", type=_vector, help="comma-separated t values")
    p.set_defaults(func=cmd_asymptotics)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        ap.error("--threads must be >= 1")
    try:
        return args.func(args)
    except (UsageError, ValueError, ZeroDivisionError) as exc:
        print(f"levelone {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
