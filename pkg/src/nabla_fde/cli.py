"""Command-line interface: ``nabla-fde run | ml | classify | solve``.

Exit codes: 0 success, 2 input or domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .classifier import DEFAULT_BOUNDARY_TOL, classify_zero_input
from .errors import DomainError, NumericalError, SeriesNotConvergent
from .mittag_leffler import DEFAULT_TOL, METHODS, MLQuery, ml_eval
from .operators import caputo_order
from .scenarios import SOLVE_METHODS, load_scenario, pick_method, run_scenario, with_overrides
from .solver import InputSignal, SystemSpec, solve_explicit, solve_recursive

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _cmd_run(args) -> int:
    sc = with_overrides(load_scenario(args.target), args.horizon, args.method)
    res = run_scenario(sc, args.out, workers=args.workers, classify_horizon=args.classify_horizon)
    sym = "alpha" if sc.sweeps_alpha else "lambda"
    print(f"wrote {res.csv_path}")
    print(f"wrote {res.svg_path}")
    print(f"{sym:>8}  {'method':<9}  {'analytic':<28}  {'empirical':<28}  {'overshoot':>10}  {'|y(a+K)|':>10}")
    for s in res.summary:
        print(
            f"{s.sweep_value:>8g}  {s.method:<9}  {s.analytic.value:<28}  {s.empirical.value:<28}"
            f"  {s.overshoot:>10.4g}  {s.tail:>10.4g}"
        )
    return EXIT_OK


def _cmd_ml(args) -> int:
    q = MLQuery(args.alpha, args.beta, args.lam, args.a, args.k)
    r = ml_eval(q, tol=args.tol, method=args.method)
    print(f"{r.value:.17g}")
    print(f"path: {r.path}")
    print(f"terms_used: {r.terms_used}")
    print(f"truncation_bound: {r.truncation_bound:.3g}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    c = classify_zero_input(args.alpha, args.lam, args.b, boundary_tol=args.boundary_tol)
    print(f"verdict: {c.verdict.value}")
    print(f"pole: {c.pole.real:.17g}{c.pole.imag:+.17g}j")
    print(f"pole_region: {c.pole_region.value}")
    return EXIT_OK


def _read_input(path: str, K: int) -> InputSignal:
    """One number per row, or a CSV whose header names a ``u`` column."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DomainError(f"{path}: empty input file")
    col = 0
    header = [c.strip() for c in rows[0]]
    if "u" in header:
        col = header.index("u")
        rows = rows[1:]
    try:
        vals = [float(r[col]) for r in rows]
    except (ValueError, IndexError):
        raise DomainError(f"{path}: could not read a numeric u column") from None
    if len(vals) != K:
        raise DomainError(f"{path}: {len(vals)} input samples, horizon is {K}")
    return InputSignal.table(vals)


def _cmd_solve(args) -> int:
    n = caputo_order(args.alpha)
    if args.b is not None:
        b = list(args.b)
    else:
        b = [args.b0, args.b1]
        if n == 1:
            if args.b1:
                raise DomainError(f"alpha = {args.alpha} takes one initial condition, but --b1 = {args.b1}")
            b = b[:1]
    if len(b) > n:
        raise DomainError(f"alpha = {args.alpha} takes {n} initial condition(s), got {len(b)}")
    b = b + [0.0] * (n - len(b))
    spec = SystemSpec(args.alpha, args.lam, args.a, tuple(b))
    u = _read_input(args.input, args.horizon) if args.input else InputSignal.zero()
    method = pick_method(args.method, args.alpha, args.lam)
    r = (solve_explicit if method == "explicit" else solve_recursive)(spec, u, args.horizon)
    out = Path(args.out)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,y\n")
        for k, v in zip(r.grid, r.y):
            fh.write(f"{k},{v:.17g}\n")
    print(f"wrote {out} ({r.K} samples, method {r.method})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nabla-fde",
        description="Nabla fractional difference systems: Mittag-Leffler values, classification, solving.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a built-in case (case1..case4) or a .scn scenario file")
    r.add_argument("target", help="case1 | case2 | case3 | case4 | path/to/file.scn")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--horizon", type=int, default=None, help="override the horizon K")
    r.add_argument("--method", choices=SOLVE_METHODS, default=None)
    r.add_argument("--workers", type=int, default=1, help="process pool size for the sweep")
    r.add_argument("--classify-horizon", type=int, default=2000, help="horizon for empirical verdicts")
    r.set_defaults(func=_cmd_run)

    m = sub.add_parser("ml", help="evaluate F_{alpha,beta}(lambda, k, a)")
    m.add_argument("--alpha", type=float, required=True)
    m.add_argument("--beta", type=float, required=True)
    m.add_argument("--lambda", dest="lam", type=float, required=True)
    m.add_argument("--a", type=int, default=0)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--tol", type=float, default=DEFAULT_TOL)
    m.add_argument("--method", choices=METHODS, default="auto")
    m.set_defaults(func=_cmd_ml)

    c = sub.add_parser("classify", help="classify the zero-input response")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--lambda", dest="lam", type=float, required=True)
    c.add_argument("--b", type=float, nargs="+", default=None, help="b_0 .. b_{n-1} (default 1, 0, ...)")
    c.add_argument("--boundary-tol", type=float, default=DEFAULT_BOUNDARY_TOL)
    c.set_defaults(func=_cmd_classify)

    s = sub.add_parser("solve", help="solve one system and write k,y as CSV")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--b0", type=float, default=1.0)
    s.add_argument("--b1", type=float, default=0.0)
    s.add_argument("--b", type=float, nargs="+", default=None, help="full b_0 .. b_{n-1}; overrides --b0/--b1")
    s.add_argument("--horizon", type=int, required=True)
    s.add_argument("--input", default=None, help="CSV with the input u(a+1..a+K)")
    s.add_argument("--method", choices=SOLVE_METHODS, default="recursive")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_cmd_solve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SeriesNotConvergent as e:
        print(f"error: {e}\nhint: `nabla-fde solve` handles |lambda| >= 1 by recursion", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
