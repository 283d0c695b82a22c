"""Command-line interface.

Subcommands: solve, oracle, validate, candf, bench.  JSON documents go to
standard output, diagnostics to standard error.  Exit codes: 0 success,
2 parse or argument error, 3 not positive definite, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import documents, report
from .errors import (
    BudgetExceededError,
    DocumentError,
    InvalidArgumentError,
    NotPositiveDefiniteError,
)
from .model import candf_instance, random_instance, validate
from .oracle import DEFAULT_BUDGET, brute_force
from .rates import compute_rate
from .solver import SolverOptions, solve

EXIT_PARSE = 2
EXIT_NOT_PD = 3
EXIT_BUDGET = 4


def _parse_channel(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse channel vector {text!r}") from exc
    if not values:
        raise InvalidArgumentError("channel vector is empty")
    return np.array(values)


def _parse_int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse integer list {text!r}") from exc


def _solver_options(args):
    return SolverOptions(threads=getattr(args, "threads", 1))


def _emit(doc):
    sys.stdout.write(documents.dump_json(doc))


def cmd_solve(args):
    inst = documents.load_instance(args.input)
    stats = validate(inst)
    start = time.perf_counter()
    result = solve(inst, SolverOptions(threads=args.threads, stats=stats))
    wall_ms = None if args.no_timing else 1000.0 * (time.perf_counter() - start)
    _emit(documents.result_document(result, stats, wall_time_ms=wall_ms))
    return 0


def cmd_validate(args):
    inst = documents.load_instance(args.input)
    stats = validate(inst)
    _emit(
        {
            "valid": True,
            "n": inst.n,
            "k": inst.k,
            "G_min": stats.G_min,
            "lambda_lb": stats.lambda_lb,
            "psi": stats.psi,
            "psi_ceil": stats.psi_ceil,
        }
    )
    return 0


def cmd_oracle(args):
    inst = documents.load_instance(args.input)
    stats = validate(inst)
    start = time.perf_counter()
    res = brute_force(inst, stats, budget=args.budget)
    wall_ms = None if args.no_timing else 1000.0 * (time.perf_counter() - start)
    _emit(documents.oracle_document(res, wall_time_ms=wall_ms))
    return 0


def cmd_candf(args):
    h = _parse_channel(args.h)
    if not args.power > 0:
        raise InvalidArgumentError("power must be positive")
    start = time.perf_counter()
    res = compute_rate(h, args.power, SolverOptions(threads=args.threads))
    wall_ms = None if args.no_timing else 1000.0 * (time.perf_counter() - start)
    stats = validate(res.instance)
    if args.emit_instance:
        meta = {"description": "compute-and-forward channel instance",
                "h": [float(x) for x in h], "power": float(args.power)}
        doc = documents.instance_to_document(res.instance, metadata=meta)
        with open(args.emit_instance, "w", encoding="utf-8") as fh:
            fh.write(documents.dump_json(doc))
    oracle_doc = None
    if args.oracle_check:
        check = brute_force(res.instance, stats, budget=args.budget)
        agree = math.isclose(check.f_star, res.f_star, rel_tol=1e-9)
        oracle_doc = {"f_star": check.f_star, "agrees": bool(agree)}
    rate = {
        "rate_bits": res.rate_bits,
        "scale": res.scale,
        "power": float(args.power),
        "h": [float(x) for x in h],
        "log_base": 2,
    }
    _emit(
        documents.result_document(
            res.solve_result, stats, wall_time_ms=wall_ms, rate=rate, oracle=oracle_doc
        )
    )
    return 0


def cmd_bench(args):
    ns = _parse_int_list(args.n)
    rows = []
    violations = 0
    for n in ns:
        if args.k > n:
            raise InvalidArgumentError(f"k={args.k} exceeds n={n}")
        for t in range(args.trials):
            seed = args.seed + t
            inst = random_instance(n, args.k, seed, shrink=args.shrink)
            stats = validate(inst)
            start = time.perf_counter()
            result = solve(inst, SolverOptions(threads=args.threads, stats=stats))
            wall_ms = 1000.0 * (time.perf_counter() - start)
            bound = math.comb(n, args.k) * (2 * stats.psi_ceil + 2) ** args.k
            ok = result.phase1_points <= bound
            if not ok:
                violations += 1
            row = {
                "n": n,
                "k": args.k,
                "seed": seed,
                "psi": stats.psi,
                "psi_ceil": stats.psi_ceil,
                "phase1_points": result.phase1_points,
                "phase1_bound": bound,
                "bound_ok": ok,
                "candidates_evaluated": result.candidates_evaluated,
                "f_star": result.f_star,
                "used_path": result.used_path,
                "wall_time_ms": round(wall_ms, 3),
                "oracle_match": "",
            }
            if args.oracle_check:
                check = brute_force(inst, stats, budget=args.budget)
                row["oracle_match"] = bool(
                    math.isclose(check.f_star, result.f_star, rel_tol=1e-9)
                )
            rows.append(row)
    print(report.format_table(rows))
    print()
    print(report.format_csv(rows))
    if violations:
        print(f"phase-1 bound violations: {violations}", file=sys.stderr)
    if args.report_dir:
        report.write_csv(rows, f"{args.report_dir}/bench.csv")
        paths = report.render_figures(rows, args.report_dir)
        for p in [f"{args.report_dir}/bench.csv", *paths]:
            print(f"wrote {p}", file=sys.stderr)
    return 0 if not violations else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lowrank-svp",
        description=(
            "Exact shortest-vector solver for lattices whose Gram matrix is "
            "a diagonal matrix minus a low-rank positive semidefinite part."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, timing=True):
        p.add_argument("--threads", type=int, default=1,
                       help="parallel reduction width (default 1)")
        if timing:
            p.add_argument("--no-timing", action="store_true",
                           help="omit wall_time_ms for byte-reproducible output")

    p = sub.add_parser("solve", help="solve an instance file exactly")
    p.add_argument("--input", required=True, help="instance JSON path")
    add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="validate an instance file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="brute-force enumeration oracle")
    p.add_argument("--input", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("candf", help="compute-and-forward rate for a channel")
    p.add_argument("--h", required=True, help="comma-separated channel vector")
    p.add_argument("--power", type=float, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--emit-instance", metavar="PATH",
                   help="also write the constructed instance file")
    p.add_argument("--oracle-check", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_candf)

    p = sub.add_parser("bench", help="random-instance benchmark table")
    p.add_argument("--n", required=True, help="comma-separated dimensions")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shrink", type=float, default=0.5)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--oracle-check", action="store_true")
    p.add_argument("--report-dir", metavar="DIR",
                   help="write bench.csv and scaling figures here")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotPositiveDefiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_PD
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
