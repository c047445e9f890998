"""Command-line entry point.

Exit codes: 0 success, 1 no solution found (or a failed check), 2 usage or
parse error, 3 memory cap refusal.
"""

import argparse
import logging
import sys

import numpy as np

from .bench import lsf_bench
from .exponents import MODELS, johnson_gap, johnson_gap_spectral
from .fileio import (
    BENCH_COLUMNS, BENCH_VERSION, InstanceParseError, fmt6, format_csv, format_instance,
    read_instance, write_instance,
)
from .instances import generate_instance, verify_solution
from .lsf import nn_dumer_solve
from .report import optimize_table, sweep_csv, sweep_rows, table_csv
from .solvers import (
    DEFAULT_BUDGET_FACTOR, DecodingParams, MemoryCapExceeded, bjmm_solve, dumer_solve,
    mmt_solve, prange_solve,
)

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_MEMORY = 0, 1, 2, 3
ALGORITHMS = ("prange", "dumer", "mmt", "bjmm", "nn-dumer")
JOHNSON_TOL = 1e-9


class UsageError(Exception):
    pass


def _csv_floats(text):
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _csv_ints(text):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


# ------------------------------------------------------------ commands

def cmd_generate(args):
    if not 0 < args.k < args.n:
        raise UsageError(f"need 0 < k < n, got n={args.n}, k={args.k}")
    if args.w is not None and not 0 <= args.w <= args.n:
        raise UsageError(f"need 0 <= w <= n, got w={args.w}")
    inst = generate_instance(args.n, args.k, args.seed, w=args.w)
    if args.out in (None, "-"):
        sys.stdout.write(format_instance(inst))
        print(f"weight {inst.w}", file=sys.stderr)
    else:
        write_instance(inst, args.out)
        print(f"wrote {args.out}: n={inst.n} k={inst.k} weight {inst.w}")
    return EXIT_OK


def cmd_solve(args):
    try:
        inst = read_instance(args.input)
    except (OSError, InstanceParseError) as exc:
        raise UsageError(f"cannot read instance: {exc}")
    if args.w is not None:
        inst = inst.with_weight(args.w)
    params = DecodingParams(args.p, args.ell, args.ell_prime, args.eps)
    kw = dict(seed=args.seed, budget_factor=args.budget_factor, max_trials=args.max_trials)
    try:
        if args.algorithm == "prange":
            e, stats = prange_solve(inst, **kw)
        elif args.algorithm == "dumer":
            e, stats = dumer_solve(inst, params, **kw)
        elif args.algorithm == "mmt":
            e, stats = mmt_solve(inst, params, all_targets=args.all_targets, **kw)
        elif args.algorithm == "bjmm":
            e, stats = bjmm_solve(inst, params, all_targets=args.all_targets, **kw)
        else:
            e, stats = nn_dumer_solve(inst, params, **kw)
    except ValueError as exc:
        raise UsageError(str(exc))
    print(f"trials {stats.permutation_trials}")
    print(f"wall_time {stats.wall_time:.6f}")
    if e is None:
        print("not found")
        return EXIT_NOT_FOUND
    assert verify_solution(inst, e)
    print(f"solution {e.to_hex()}")
    print(f"weight {e.weight()}")
    return EXIT_OK


def cmd_optimize_table(args):
    models = args.models or list(MODELS)
    bad = [m for m in models if m not in MODELS]
    if bad:
        raise UsageError(f"unknown model(s) {bad}; choose from {', '.join(MODELS)}")
    if args.rate is not None and not 0 < args.rate < 1:
        raise UsageError("rate must lie in (0, 1)")
    if args.sweep:
        rates = np.linspace(args.sweep_range[0], args.sweep_range[1], args.sweep)
        rows = sweep_rows(models, rates, workers=args.workers, bjmm_levels=args.bjmm_levels)
        _emit(sweep_csv(rows), args.out)
        return EXIT_OK
    rows = optimize_table(models, rate=args.rate, workers=args.workers,
                          bjmm_levels=args.bjmm_levels)
    _emit(table_csv(rows), args.out)
    if args.out not in (None, "-"):
        for r in rows:
            print(f"{r['model']:<11} rate {fmt6(r['rate'])} time {fmt6(r['time'])} "
                  f"space {fmt6(r['space'])} {r['status']}")
    return EXIT_OK


def cmd_lsf_bench(args):
    if any(d > 64 or d < 2 for d in args.dims):
        raise UsageError("dims must lie in [2, 64]")
    oversample = None if args.oversample == "dim2" else float(args.oversample)
    try:
        rep = lsf_bench(args.dims, args.list_exp, args.gamma, oversample, args.seed,
                        alpha=args.alpha, beta=args.beta, queries=args.queries,
                        repeats=args.repeats, exhaustive=args.exhaustive)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = [vars(r) for r in rep.rows]
    text = format_csv(BENCH_VERSION, BENCH_COLUMNS, rows)
    text += (f"# fit update_slope={fmt6(rep.update_slope)} update_theory={fmt6(rep.update_theory)}"
             f" query_slope={fmt6(rep.query_slope)} query_theory={fmt6(rep.query_theory)}\n")
    _emit(text, args.out)
    return EXIT_OK


def cmd_johnson_check(args):
    if not 2 <= args.n_max <= 14:
        raise UsageError("n-max must lie in [2, 14]")
    print("N,r,formula,spectral,abs_diff")
    worst = 0.0
    for N in range(2, args.n_max + 1):
        for r in range(1, N):
            f, s = johnson_gap(N, r), johnson_gap_spectral(N, r)
            worst = max(worst, abs(f - s))
            print(f"{N},{r},{f:.12f},{s:.12f},{abs(f - s):.3e}")
    print(f"# max abs diff {worst:.3e}", file=sys.stderr)
    return EXIT_OK if worst <= JOHNSON_TOL else EXIT_NOT_FOUND


# ------------------------------------------------------------ parser

def build_parser():
    ap = argparse.ArgumentParser(prog="isdlab", description="Information set decoding laboratory.")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random planted instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--w", type=int, help="error weight (default: GV weight)")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run a decoder on an instance file")
    s.add_argument("input")
    s.add_argument("--algorithm", "-a", choices=ALGORITHMS, default="prange")
    s.add_argument("--p", type=int, default=0)
    s.add_argument("--ell", type=int, default=0)
    s.add_argument("--ell-prime", type=int, default=0)
    s.add_argument("--eps", type=int, default=0, help="BJMM overlap weight")
    s.add_argument("--w", type=int, help="override the weight bound")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget-factor", type=float, default=DEFAULT_BUDGET_FACTOR)
    s.add_argument("--max-trials", type=int)
    s.add_argument("--all-targets", action="store_true",
                   help="MMT/BJMM: try every first-level target per permutation")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("optimize-table", help="optimised exponents per model")
    o.add_argument("--models", type=lambda t: [m for m in t.split(",") if m])
    o.add_argument("--rate", type=float, help="fixed rate instead of the worst case")
    o.add_argument("--sweep", type=int, metavar="N", help="emit N-point exponent-vs-rate curves")
    o.add_argument("--sweep-range", type=_csv_floats, default=[0.05, 0.5])
    o.add_argument("--bjmm-levels", type=int, choices=(2, 3), default=3)
    o.add_argument("--workers", type=int, help="processes (default: all cores)")
    o.add_argument("--out", help="CSV path (default stdout)")
    o.set_defaults(func=cmd_optimize_table)

    b = sub.add_parser("lsf-bench", help="measure LSF touched buckets and recall")
    b.add_argument("--dims", type=_csv_ints, default=[24, 32, 40, 48])
    b.add_argument("--list-exp", type=float, default=0.242)
    b.add_argument("--gamma", type=float, default=11 / 32, help="relative query radius")
    b.add_argument("--alpha", type=float, help="relative insert radius")
    b.add_argument("--beta", type=float, help="relative bucket-scan radius")
    b.add_argument("--oversample", default="dim2", help="number or 'dim2'")
    b.add_argument("--queries", type=int, default=64)
    b.add_argument("--repeats", type=int, default=4)
    b.add_argument("--exhaustive", action="store_true", help="use every vector as a filter")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out")
    b.set_defaults(func=cmd_lsf_bench)

    j = sub.add_parser("johnson-check", help="Johnson graph gap: formula vs spectrum")
    j.add_argument("--n-max", type=int, default=12)
    j.set_defaults(func=cmd_johnson_check)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryCapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_MEMORY


if __name__ == "__main__":
    sys.exit(main())
