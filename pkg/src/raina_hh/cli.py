"""Command-line front end: ``raina-hh <subcommand> ...``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError, RainaHHError
from .experiment import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATIONS, OUT_ENV, exit_status, load_config, run_experiment
from .fracint import METHODS, FracIntegralRequest, frac_integral_left, frac_integral_right, moment_identity_check
from .hh import TOL_ABS, TOL_REL, hh_check_convex, hh_check_strongly_convex, reduction_equivalence
from .process import parse_process_spec
from .reporting import HH_COLUMNS, csv_text, fmt, frac_record, hh_row, json_text, write_frac_records, write_text
from .series import DEFAULT_TOL, RainaKernel, eval_raina, parse_sigma_spec


def _common(p: argparse.ArgumentParser, tol_default: float):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=1, help="number of sample paths")
    p.add_argument("--tol", type=float, default=tol_default)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--out", help="write results to this file (.csv or .json)")


def _kernel_args(p: argparse.ArgumentParser):
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--sigma", default="const1", help="const1, const:<c>, geom:<q>, harmonic, list:..., file:<path>")


def _kernel(a) -> RainaKernel:
    return RainaKernel(a.rho, a.lam, a.omega, parse_sigma_spec(a.sigma))


def _out_path(name: str) -> Path:
    p = Path(name)
    return p if p.is_absolute() else Path(os.environ.get(OUT_ENV, ".")) / p


def cmd_eval_raina(a) -> int:
    val, rep = eval_raina(_kernel(a), a.x, m=a.m, lambda_override=a.lambda_override, tol=a.tol)
    print(fmt(val))
    print(f"terms_used={rep.terms_used} tail_bound={rep.tail_bound:.3e} tol={rep.requested_tol:g}", file=sys.stderr)
    return EXIT_OK


def cmd_frac_int(a) -> int:
    kernel = _kernel(a)
    lo, hi = sorted((a.base, a.x))
    proc = parse_process_spec(a.process, (lo, hi), "none")
    side = "left" if a.x > a.base else "right"
    req = FracIntegralRequest(kernel, side, a.base, a.x, proc, a.method, a.paths, a.seed, a.tol)
    est = frac_integral_left(req) if side == "left" else frac_integral_right(req)
    u, v = (a.base, a.x) if side == "left" else (a.x, a.base)
    print(f"mean={fmt(est.mean)} variance={fmt(est.variance)} n_paths={est.n_paths} method={est.method}")
    if a.out:
        write_frac_records([frac_record(kernel, side, u, v, a.x, est)], _out_path(a.out))
    return EXIT_OK


def cmd_hh_check(a) -> int:
    kernel = _kernel(a)
    strong = a.modulus is not None
    proc = parse_process_spec(a.process, (a.u, a.v), "strongly_convex" if strong else "convex", a.modulus)
    fn = hh_check_strongly_convex if strong else hh_check_convex
    report = fn(proc, kernel, a.u, a.v, a.paths, a.seed, method=a.method, tol_abs=a.tol_abs, tol_rel=a.tol)
    s = report.summary()
    line = f"left={fmt(s['mean_left'])} middle={fmt(s['mean_middle'])} right={fmt(s['mean_right'])}"
    if strong:
        line += f" left_corr={fmt(s['mean_left_corr'])} right_corr={fmt(s['mean_right_corr'])}"
    print(line)
    print(f"violations_lm={report.violations_lm} violations_mr={report.violations_mr} "
          f"hypothesis_verified={fmt(report.hypothesis_verified)}")
    status = "violations" if not report.ok else ("hypothesis_unverified" if not report.hypothesis_verified else "ok")
    if a.out:
        out = _out_path(a.out)
        if out.suffix == ".csv":
            write_text(out, csv_text([hh_row(0, report, status=status)], HH_COLUMNS))
        else:
            write_text(out, json_text({**report.to_dict(full=True), "status": status}))
    print("PASS" if status == "ok" else status.upper())
    return exit_status([{"status": status}])


def cmd_identity_check(a) -> int:
    lhs, rhs = moment_identity_check(_kernel(a), a.u, a.v, a.p, a.side)
    ok = abs(lhs - rhs) <= a.tol * (1 + abs(rhs))
    print(f"lhs={fmt(lhs)} rhs={fmt(rhs)} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_reduce_check(a) -> int:
    proc = parse_process_spec(a.process, (a.u, a.v), "convex")
    gap = reduction_equivalence(a.alpha, proc, a.u, a.v, a.paths, a.seed)
    ok = gap <= a.tol
    print(f"discrepancy={gap!r} {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VIOLATIONS


def cmd_run(a) -> int:
    cfg = load_config(a.config)
    if a.workers:
        cfg.workers = a.workers
    code, rows, written = run_experiment(cfg)
    for r in rows:
        print(f"cell {r['cell']}: {r['status']}" + (f" ({r['error']})" if r.get("error") else ""))
    for kind, path in written.items():
        print(f"wrote {kind}: {path}")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="raina-hh", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-raina", help="evaluate Raina's function")
    _kernel_args(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--m", type=int, default=0, help="coefficient shift sigma_m")
    p.add_argument("--lambda-override", type=float)
    _common(p, DEFAULT_TOL)
    p.set_defaults(func=cmd_eval_raina)

    p = sub.add_parser("frac-int", help="generalised fractional integral of a process")
    _kernel_args(p)
    p.add_argument("--process", required=True, help='e.g. "poly:t^2" or "random:uniform(0,1);normal(0,1)"')
    p.add_argument("--base", type=float, required=True, help="u for the left integral, v for the right one")
    p.add_argument("--x", type=float, required=True)
    _common(p, DEFAULT_TOL)
    p.set_defaults(func=cmd_frac_int)

    p = sub.add_parser("hh-check", help="Hermite-Hadamard chain per path")
    _kernel_args(p)
    p.add_argument("--process", required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--modulus", help="strong-convexity modulus spec (const(c), uniform(a,b), leading, scaled(f))")
    p.add_argument("--tol-abs", type=float, default=TOL_ABS)
    _common(p, TOL_REL)
    p.set_defaults(func=cmd_hh_check)

    p = sub.add_parser("identity-check", help="moment identity: quadrature vs closed form")
    _kernel_args(p)
    p.add_argument("--p", type=int, choices=(0, 1, 2), required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    _common(p, 1e-7)
    p.set_defaults(func=cmd_identity_check)

    p = sub.add_parser("reduce-check", help="Riemann-Liouville reduction of the middle term")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--process", required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    _common(p, 1e-8)
    p.set_defaults(func=cmd_reduce_check)

    p = sub.add_parser("run", help="run a TOML experiment config")
    p.add_argument("config")
    p.add_argument("--workers", type=int, default=0)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RainaHHError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
