"""Command-line interface for sweeps, bound tables, and verification runs."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from . import bounds, kernel, lemmas
from .characters import character_from_label, conductor
from .harness import DEFAULT_BOUNDS, SweepConfig, run_sweep, verify_all


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="exact sums vs bounds over a modulus range")
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int, default=2000)
    p.add_argument("--parity", choices=["even", "odd", "both"], default="both")
    p.add_argument(
        "--bounds",
        default=",".join(DEFAULT_BOUNDS),
        help=f"comma list from: {', '.join(bounds.bound_names())}",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")


def _cmd_sweep(args) -> int:
    parities = ("even", "odd") if args.parity == "both" else (args.parity,)
    cfg = SweepConfig(
        q_min=args.q_min,
        q_max=args.q_max,
        parities=parities,
        bounds=tuple(args.bounds.split(",")),
        workers=args.workers,
        output_format=args.format,
        output_path=args.out,
        store_rows=args.out is None,
    )
    report = run_sweep(cfg)
    if args.out is None:
        if args.format == "csv":
            sys.stdout.write(report.csv_text())
        else:
            json.dump(report.to_json_dict(), sys.stdout, indent=1)
            sys.stdout.write("\n")
    summary = report.summary
    print(
        f"# checked {summary['characters_checked']} primitive characters in "
        f"[{cfg.q_min}, {cfg.q_max}]: {summary['violations']} violations, "
        f"max S/(sqrt(q) log q) = {summary['max_ratio']}",
        file=sys.stderr,
    )
    if summary["violations"]:
        for row in summary["violation_rows"]:
            print(f"# VIOLATION: {row}", file=sys.stderr)
        return 1
    return 0


def _cmd_bounds(args) -> int:
    parities = ("even", "odd") if args.parity == "both" else (args.parity,)
    rows = []
    for parity in parities:
        for bv in bounds.catalog_bounds(args.q, parity):
            rows.append(bv)
    if args.format == "json":
        json.dump(
            [
                {
                    "q": bv.q,
                    "parity": bv.parity,
                    "bound_name": bv.name,
                    "quantity": bv.quantity,
                    "value": bv.value,
                    "main_term": bv.main_term,
                    "second_term": bv.second_term,
                    "psi_term": bv.psi_term,
                    "as_printed": bv.as_printed,
                }
                for bv in rows
            ],
            sys.stdout,
            indent=1,
        )
        sys.stdout.write("\n")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(
            ["q", "parity", "bound_name", "quantity", "value", "main_term",
             "second_term", "psi_term", "as_printed"]
        )
        for bv in rows:
            w.writerow(
                [bv.q, bv.parity, bv.name, bv.quantity, repr(bv.value),
                 repr(bv.main_term), repr(bv.second_term), repr(bv.psi_term),
                 bv.as_printed]
            )
    return 0


def _cmd_crossover(args) -> int:
    try:
        qstar = bounds.crossover(args.parity)
    except bounds.CrossoverNotFound as exc:
        print(f"FAILED: {exc}", file=sys.stderr)
        return 1
    print(f"{args.parity} crossover: q* = {qstar}")
    print(
        "confirmed on every integer in "
        f"[{qstar}, {qstar + 1000}] and a log grid up to 10^7"
    )
    return 0


def _cmd_kernel_check(args) -> int:
    grid = kernel.default_grid(refine=2 if args.grid == "fine" else 1)
    result = kernel.lemma3_check(grid)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["u", "P", "s_u_p", "g_p", "ratio"])
        for P in grid.P_values:
            s = kernel.s_u_p_grid(grid.u_points, P)
            g = kernel.g_p_closed_grid(grid.u_points, P)
            for u, sv, gv in zip(grid.u_points, s, g):
                w.writerow([repr(float(u)), repr(P), repr(float(sv)),
                            repr(float(gv)), repr(float(abs(sv) / gv))])
    finally:
        if args.out:
            out.close()
    summary = {
        "schema": 1,
        "worst_ratio": result.worst_ratio,
        "worst_u": result.worst_u,
        "worst_P": result.worst_P,
        "bound": result.bound,
        "margin": result.bound - result.worst_ratio,
        "n_points": result.n_points,
        "violations": len(result.violations),
    }
    print(json.dumps(summary, indent=1), file=sys.stderr)
    return 0 if not result.violations else 1


def _cmd_lemmas(args) -> int:
    cfg1 = lemmas.default_lemma1_config(n_max=args.n_max)
    cfg2 = lemmas.default_lemma2_config(n_max=args.n_max, seed=args.seed)
    r1 = lemmas.lemma1_check(cfg1)
    r2 = lemmas.lemma2_check(cfg2)
    b1 = (2.0 / math.pi) * (
        math.log(r1.worst_n) + bounds.EULER_GAMMA + math.log(2.0) + 3.0 / r1.worst_n
    )
    b2 = math.log(r2.worst_n) + bounds.EULER_GAMMA + math.log(2.0) + 3.0 / r2.worst_n
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["lemma", "n", "params", "sum", "bound", "slack"])
    w.writerow(["sine_sum", r1.worst_n, repr(r1.worst_params[0]),
                repr(b1 - r1.min_slack), repr(b1), repr(r1.min_slack)])
    w.writerow(["cosine_diff_sum", r2.worst_n,
                f"{r2.worst_params[0]!r};{r2.worst_params[1]!r}",
                repr(b2 - r2.min_slack), repr(b2), repr(r2.min_slack)])
    ok = r1.min_slack > 0 and r2.min_slack > 0
    print(
        f"# min slacks {r1.min_slack:.6f} ({r1.n_checked} checks), "
        f"{r2.min_slack:.6f} ({r2.n_checked} checks, seed {r2.seed})",
        file=sys.stderr,
    )
    return 0 if ok else 1


def _cmd_char_info(args) -> int:
    label = tuple(int(t) for t in args.label.replace(".", ",").split(",") if t != "")
    chi = character_from_label(args.q, label)
    info = chi.to_json_dict()
    info["primitive"] = chi.is_primitive
    info["principal"] = chi.is_principal
    info["conductor_check"] = conductor(chi)
    json.dump(info, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return 0


def _cmd_verify_all(args) -> int:
    cfg = SweepConfig(
        q_min=args.q_min, q_max=args.q_max, workers=args.workers, store_rows=False
    )
    outcome = verify_all(sweep_cfg=cfg)
    if outcome.warning:
        print(f"WARNING: {outcome.warning}", file=sys.stderr)
    for suite in outcome.suites:
        status = "PASS" if suite.passed else "FAIL"
        line = f"[{status}] {suite.name}: {suite.detail}"
        if suite.error:
            line += f" ({suite.error})"
        print(line)
    return 0 if outcome.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvbounds",
        description="Exact Dirichlet character-sum extremes vs explicit bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_sweep(sub)

    p = sub.add_parser("bounds", help="evaluate every cataloged bound at one q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--parity", choices=["even", "odd", "both"], default="both")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("crossover", help="locate where theorem1 undercuts pomerance")
    p.add_argument("--parity", choices=["even", "odd"], required=True)

    p = sub.add_parser("kernel-check", help="ratio sweep of |S(u;P)| / G_P(u)")
    p.add_argument("--grid", choices=["default", "fine"], default="default")
    p.add_argument("--out", default=None, help="CSV path (stdout if omitted)")

    p = sub.add_parser("lemmas", help="slack sweeps for the two sum inequalities")
    p.add_argument("--n-max", type=int, default=500)
    p.add_argument("--seed", type=int, default=lemmas.DEFAULT_SEED)

    p = sub.add_parser("char-info", help="metadata for one character")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--label", required=True, help="comma- or dot-separated exponents")

    p = sub.add_parser("verify-all", help="composite verification, exit 0 iff all pass")
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "bounds": _cmd_bounds,
        "crossover": _cmd_crossover,
        "kernel-check": _cmd_kernel_check,
        "lemmas": _cmd_lemmas,
        "char-info": _cmd_char_info,
        "verify-all": _cmd_verify_all,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
