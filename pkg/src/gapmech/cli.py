"""Command-line front end.

Subcommands: ``gen``, ``solve``, ``run``, ``estimate``, ``audit-truth``,
``verify``.  Exit code 0 on success, 1 on a usage or validation error,
2 when ``verify`` finds a failing check.
"""

from __future__ import annotations

import argparse
import json
import sys

from .instances import brute_force_opt, load_instance, save_instance
from .local_search import SearchConfig, maximize_surrogate
from .mechanism import (PROFILES, audit_truthfulness, generate_instance,
                        run_mechanism)
from .rounding import exact_expected_welfare, sample_welfare
from .verify import run_suite


class _Parser(argparse.ArgumentParser):
    # usage problems are validation errors, not verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gapmech", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--bins", type=int, required=True)
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", choices=PROFILES, default="uniform")
    p.add_argument("--out", required=True)

    p = sub.add_parser("solve", help="maximize the surrogate objective")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trace", help="write the search trace as JSON")

    p = sub.add_parser("run", help="full mechanism run (solve, round, pay)")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bidders", choices=("bins", "items"), default="bins")
    p.add_argument("--rounding", choices=("greedy", "simplified"),
                   default="greedy")
    p.add_argument("--out", help="write MechanismRun JSON here (default stdout)")

    p = sub.add_parser("estimate",
                       help="expected welfare: Monte Carlo, closed form, OPT")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounding", choices=("greedy", "simplified"),
                   default="greedy")

    p = sub.add_parser("audit-truth",
                       help="exact expected utility of truth vs misreports")
    p.add_argument("--instance", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--bidder", type=int, required=True)
    p.add_argument("--bidders", choices=("bins", "items"), default="bins")
    p.add_argument("--grid", default="0.5,0.75,0.9,1.1,1.25,1.5,2")

    p = sub.add_parser("verify", help="run the invariant check suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--out", help="write the report as JSON")
    return parser


def _cmd_gen(args) -> int:
    inst = generate_instance(args.bins, args.items, args.seed, args.profile)
    save_instance(inst, args.out)
    print(f"wrote {args.bins}x{args.items} '{args.profile}' instance to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    cfg = SearchConfig.for_instance(inst, args.eps)
    x, _, trace = maximize_surrogate(inst, cfg)
    print(f"F(y*) = {trace.final_value:.12g}")
    print(f"iterations = {trace.iterations} (cap {cfg.max_iters})")
    print(f"components = {x.n_components}, exit = {trace.exit_reason}")
    if trace.guarantee_void:
        print("note: eps > 1/n, approximation guarantee void")
    if args.trace:
        with open(args.trace, "w") as fh:
            json.dump(trace.to_dict(), fh, indent=2)
        print(f"trace written to {args.trace}")
    return 0


def _cmd_run(args) -> int:
    inst = load_instance(args.instance)
    run = run_mechanism(inst, args.eps, seed=args.seed,
                        bidder_model=args.bidders, rounding=args.rounding)
    payload = run.to_json(indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
        print(f"run written to {args.out} (welfare {run.welfare:.6g})")
    else:
        print(payload)
    return 0


def _cmd_estimate(args) -> int:
    inst = load_instance(args.instance)
    cfg = SearchConfig.for_instance(inst, args.eps)
    x, _, trace = maximize_surrogate(inst, cfg)
    exact = exact_expected_welfare(inst, x)
    mean, se = sample_welfare(inst, x, args.rounding, args.samples, args.seed)
    print(f"monte carlo ({args.samples} samples, {args.rounding}): "
          f"{mean:.6f} +/- {se:.6f}")
    print(f"exact expected welfare: {exact:.12g}")
    print(f"F(y*): {trace.final_value:.12g}")
    try:
        opt, _ = brute_force_opt(inst)
    except ValueError:
        print("brute-force OPT: skipped (instance too large)")
    else:
        ratio = exact / opt if opt > 0 else float("nan")
        print(f"brute-force OPT: {opt:.12g}")
        print(f"exact / OPT: {ratio:.6f}")
    return 0


def _cmd_audit_truth(args) -> int:
    inst = load_instance(args.instance)
    factors = tuple(float(tok) for tok in args.grid.split(",") if tok.strip())
    if any(f <= 0 for f in factors):
        raise ValueError("grid factors must be positive")
    rows = audit_truthfulness(inst, args.bidder, args.bidders, args.eps,
                              factors)
    print(f"{'factor':>8}  {'E[value]':>12}  {'E[payment]':>12}  "
          f"{'E[utility]':>12}")
    for row in rows:
        tag = "  <- truth" if row is rows[0] else ""
        print(f"{row.factor:8.3f}  {row.expected_value:12.6f}  "
              f"{row.expected_payment:12.6f}  {row.expected_utility:12.6f}"
              f"{tag}")
    best = max(rows[1:], key=lambda r: r.expected_utility, default=None)
    if best is not None and best.expected_utility > rows[0].expected_utility:
        print(f"best misreport advantage: "
              f"{best.expected_utility - rows[0].expected_utility:.6g} "
              f"at factor {best.factor}")
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.level)
    for res in report.results:
        print(f"{'PASS' if res.passed else 'FAIL'}  {res.name}: {res.detail}")
        if not res.passed and res.counterexample:
            print(f"      counterexample: {res.counterexample}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report.to_dict(), fh, indent=2)
    print(f"{sum(r.passed for r in report.results)}/{len(report.results)} "
          f"checks passed at level '{args.level}'")
    return 0 if report.ok else 2


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "run": _cmd_run,
    "estimate": _cmd_estimate,
    "audit-truth": _cmd_audit_truth,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 0 if exc.code in (0, None) else int(exc.code)
    except (ValueError, OSError, json.JSONDecodeError, KeyError,
            IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
