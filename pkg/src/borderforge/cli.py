"""Command line entry point: solve, sample, datagen, bench."""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys

from .algebra import Context, format_polynomial, format_term, parse_polynomial
from .bba import compute_border_basis
from .bench import load_suite, run_benchmark
from .datagen import (
    extract_samples,
    tokenize_infix,
    tokenize_monomial,
    write_dataset,
)
from .errors import BorderforgeError
from .obba import OracleConfig, run_obba
from .sampling import backward_transform, child_seed, sample_border_basis


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="borderforge",
        description="Border bases of zero-dimensional ideals over F_p.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_context(p, nvars_min=1):
        p.add_argument("--field-p", type=int, required=True, metavar="P")
        p.add_argument("--nvars", type=int, required=True, metavar="N")
        p.add_argument("--order", default="degrevlex",
                       choices=("degrevlex", "deglex"))
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(nvars_min=nvars_min)

    solve = sub.add_parser("solve", help="compute a border basis")
    add_context(solve)
    solve.add_argument("--input", required=True,
                       help="file with one polynomial per line")
    solve.add_argument("--degree-cap", type=int, default=None)
    solve.add_argument("--variant", default="ibba", choices=("bba", "ibba"))
    solve.add_argument("--elim", default="fge", choices=("fge", "naive"))
    solve.add_argument("--trace-out", default=None)
    solve.add_argument("--oracle", default="none",
                       help="none|perfect|replay:FILE|external:ADDR")
    solve.add_argument("--oracle-budget", type=int, default=5)
    solve.add_argument("--gap-threshold", type=float, default=0.9)
    solve.add_argument("--truncate", type=int, default=5)

    sample = sub.add_parser("sample", help="sample border basis instances")
    add_context(sample, nvars_min=2)
    sample.add_argument("--degree-caps", type=int, nargs="+", required=True)
    sample.add_argument("--count", type=int, default=1)
    sample.add_argument("--transform-rows", type=int, default=None)
    sample.add_argument("--transform-degree", type=int, default=1)
    sample.add_argument("--transform-terms", type=int, default=2)
    sample.add_argument("--out", required=True)

    datagen = sub.add_parser("datagen", help="emit training samples")
    add_context(datagen, nvars_min=2)
    datagen.add_argument("--degree-caps", type=int, nargs="+", required=True)
    datagen.add_argument("--count", type=int, default=1)
    datagen.add_argument("--last-k", type=int, default=5)
    datagen.add_argument("--truncate", type=int, default=5)
    datagen.add_argument("--gap-threshold", type=float, default=0.9)
    datagen.add_argument("--transform-rows", type=int, default=None)
    datagen.add_argument("--transform-degree", type=int, default=1)
    datagen.add_argument("--transform-terms", type=int, default=2)
    datagen.add_argument("--scheme", default="json",
                         choices=("json", "infix", "monomial"))
    datagen.add_argument("--out", required=True)

    bench = sub.add_parser("bench", help="run a benchmark suite")
    bench.add_argument("--suite", required=True, help="TOML suite config")
    bench.add_argument("--out", default=None, help="JSON report path")
    bench.add_argument("--csv", default=None, help="CSV report path")

    return parser


def make_context(args) -> Context:
    if args.nvars < getattr(args, "nvars_min", 1):
        raise BorderforgeError(
            f"this command needs at least {args.nvars_min} variables"
        )
    return Context(args.field_p, args.nvars, args.order)


def cmd_solve(args) -> int:
    ctx = make_context(args)
    with open(args.input) as fh:
        gens = [
            parse_polynomial(ctx, line)
            for line in fh
            if line.strip() and not line.startswith("#")
        ]
    if args.oracle == "none":
        basis, trace = compute_border_basis(
            ctx, gens, variant=args.variant, eliminator=args.elim,
            max_degree=args.degree_cap,
        )
    else:
        from .bench import make_oracle

        config = OracleConfig(
            budget=args.oracle_budget,
            gap_threshold=args.gap_threshold,
            truncation=args.truncate,
        )
        basis, trace = run_obba(
            ctx, gens, make_oracle(args.oracle, args.truncate), config,
            variant=args.variant, eliminator=args.elim,
            max_degree=args.degree_cap,
        )
    print(json.dumps({
        "order_ideal": [format_term(t, 1) for t in basis.order_ideal.terms],
        "generators": [format_polynomial(g) for g in basis.generators],
    }, indent=2))
    if args.trace_out:
        with open(args.trace_out, "w") as fh:
            json.dump({
                "iterations": [vars(r) for r in trace.iterations],
                "enlargements": trace.enlargements,
                "fallback_events": trace.fallback_events,
                "oracle_calls": trace.oracle_calls,
                "final_degree": trace.final_degree,
                "totals": trace.totals,
            }, fh, indent=2)
    return 0


def cmd_sample(args) -> int:
    ctx = make_context(args)
    if len(args.degree_caps) != ctx.n:
        raise BorderforgeError("need one degree cap per variable")
    rows = args.transform_rows or ctx.n + 1
    with open(args.out, "w") as fh:
        for i in range(args.count):
            rng = random.Random(child_seed(args.seed, i))
            basis, points = sample_border_basis(ctx, args.degree_caps, rng)
            gens = backward_transform(
                basis, rows, args.transform_degree,
                args.transform_terms, rng,
            )
            fh.write(json.dumps({
                "seed": child_seed(args.seed, i),
                "order_ideal_corners": [
                    list(t) for t in basis.order_ideal.corner_terms()
                ],
                "points": [list(p) for p in points],
                "border_basis": [format_polynomial(g)
                                 for g in basis.generators],
                "F": [format_polynomial(f) for f in gens],
            }, separators=(",", ":")) + "\n")
    return 0


def cmd_datagen(args) -> int:
    ctx = make_context(args)
    if len(args.degree_caps) != ctx.n:
        raise BorderforgeError("need one degree cap per variable")
    rows = args.transform_rows or ctx.n + 1
    samples = []
    for i in range(args.count):
        rng = random.Random(child_seed(args.seed, i))
        basis, _ = sample_border_basis(ctx, args.degree_caps, rng)
        gens = backward_transform(
            basis, rows, args.transform_degree, args.transform_terms, rng
        )
        extracted, _, _ = extract_samples(
            ctx, gens, last_k=args.last_k, truncation=args.truncate,
            gap_threshold=args.gap_threshold,
        )
        samples.extend(extracted)
    if args.scheme == "json":
        write_dataset(args.out, samples)
    else:
        encode = tokenize_infix if args.scheme == "infix" else tokenize_monomial
        with open(args.out, "w") as fh:
            for s in samples:
                fh.write(json.dumps(encode(s)) + "\n")
    return 0


def cmd_bench(args) -> int:
    config = load_suite(args.suite)
    records, summary = run_benchmark(config)
    report = {
        "records": [
            {
                "instance": r.instance,
                "seed": r.seed,
                "params": r.params,
                "digest": r.digest,
                "variants": r.variants,
                "gap_trace": r.gap_trace,
            }
            for r in records
        ],
        "summary": summary,
    }
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    else:
        print(json.dumps(summary, indent=2))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["instance", "variant", "metric", "value"])
            for r in records:
                for name, metrics in r.variants.items():
                    for key, value in metrics.items():
                        writer.writerow([r.instance, name, key, value])
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "sample": cmd_sample,
    "datagen": cmd_datagen,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        return COMMANDS[args.command](args)
    except (BorderforgeError, ValueError, OSError) as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
