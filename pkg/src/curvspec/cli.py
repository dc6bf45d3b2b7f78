"""Command-line front end: ``curvspec run | converge | list-scenarios``."""

from __future__ import annotations

import argparse
import os
import sys

from .eigensolve import DENSE_CAP
from .errors import InvalidArgument, ScenarioError, SizeExceeded, SolverFailure
from .report import reports_to_csv, reports_to_json, summarize
from .scenarios import (
    converge_scenario,
    exit_status,
    list_scenarios,
    load_scenario,
    orders_to_csv,
    run_scenario,
)

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_SOFTWARE = 70


def _common(p):
    p.add_argument("scenario", help="scenario JSON file or built-in name (see list-scenarios)")
    p.add_argument("--out", default=".", help="output directory (default: current directory)")
    p.add_argument("--format", choices=("json", "csv", "both"), default="both")
    p.add_argument("--seed", type=int, default=0, help="base seed for random profiles (default 0)")
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP,
                   help=f"largest periodic operator solved densely (default {DENSE_CAP})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvspec", description="Spectral gap bound verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("run", help="evaluate the bounds selected by a scenario"))
    _common(sub.add_parser("converge", help="observed convergence orders under grid refinement"))
    sub.add_parser("list-scenarios", help="list built-in scenarios")
    return parser


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _run(args) -> int:
    if args.seed < 0 or args.seed >= 2**64:
        raise ScenarioError("seed must be an unsigned 64-bit integer", "--seed")
    sc = load_scenario(args.scenario)
    seed = sc.seed if sc.seed is not None else args.seed
    reports = run_scenario(sc, seed=seed, dense_cap=args.dense_cap)
    header = {"scenario": sc.name, "seed": seed, "dense_cap": args.dense_cap}
    os.makedirs(args.out, exist_ok=True)
    if args.format in ("json", "both"):
        _write(os.path.join(args.out, f"{sc.name}.json"), reports_to_json(reports, header))
    if args.format in ("csv", "both"):
        _write(os.path.join(args.out, f"{sc.name}.csv"), reports_to_csv(reports, header))
    code = exit_status(reports)
    counts = summarize(reports)
    summary = ", ".join(f"{k}={counts[k]}" for k in sorted(counts)) or "no reports"
    print(f"{sc.name}: {summary}")
    for r in reports:
        if r.status in ("fail", "inconclusive"):
            print(f"  {r.status.upper()} {r.case} {r.bound} n={r.n} lhs={r.lhs:.12g} rhs={r.rhs:.12g}")
    return code


def _converge(args) -> int:
    sc = load_scenario(args.scenario)
    seed = sc.seed if sc.seed is not None else args.seed
    rows = converge_scenario(sc, seed=seed, dense_cap=args.dense_cap)
    if not rows:
        raise ScenarioError("no case has a solver.N_list to refine", "$.cases")
    os.makedirs(args.out, exist_ok=True)
    text = orders_to_csv(rows, {"scenario": sc.name, "seed": seed})
    _write(os.path.join(args.out, f"{sc.name}-orders.csv"), text)
    for r in rows:
        order = "exact" if r.method == "exact" else f"{r.order:.4f}"
        print(f"{r.case:24s} {r.quantity:28s} {order}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-scenarios":
            for name, desc in list_scenarios():
                print(f"{name:20s} {desc}")
            return EXIT_OK
        if args.command == "run":
            return _run(args)
        return _converge(args)
    except (ScenarioError, InvalidArgument, SizeExceeded) as exc:
        print(f"curvspec: malformed scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"curvspec: solver failure: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
