"""Benchmark harness: measurable behavior of the engine variants.

Instances come from the sampling pipeline (hidden border basis, random
ideal-preserving transform), so every run has a ground truth and a
guaranteed zero-dimensional ideal.  All selected variants must agree on
the output basis; disagreement is a correctness bug, not a data point.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Context
from .bba import EXPAND, BorderBasis, RunTrace, compute_border_basis
from .errors import DegreeBudgetExceeded, VariantDisagreement
from .obba import ORACLES, OracleConfig, ReplayOracle, run_obba
from .sampling import backward_transform, child_seed, sample_border_basis

DEFAULT_VARIANTS = ("bba", "ibba", "ibba+naive", "obba:perfect")


def basis_digest(basis: BorderBasis) -> str:
    payload = json.dumps(
        [
            [list(t) for t in basis.order_ideal.terms],
            [[[c, list(t)] for t, c in g.items] for g in basis.generators],
        ],
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class BenchRecord:
    instance: int
    seed: int
    params: dict
    variants: dict = field(default_factory=dict)  # name -> metrics
    digest: str = ""
    gap_trace: list = field(default_factory=list)


def parse_variant(name: str):
    """'ibba+naive' -> (base, oracle, eliminator)."""
    base, _, elim = name.partition("+")
    eliminator = elim or "fge"
    if base.startswith("obba:"):
        return "ibba", base.split(":", 1)[1], eliminator
    if base not in ("bba", "ibba"):
        raise ValueError(f"unknown variant {name!r}")
    return base, None, eliminator


def make_oracle(spec: str, truncation: int):
    if spec.startswith("replay:"):
        return ReplayOracle.from_file(spec.split(":", 1)[1], truncation)
    if spec.startswith("external:"):
        from .obba import ExternalOracle

        return ExternalOracle(spec.split(":", 1)[1], truncation)
    try:
        return ORACLES[spec]()
    except KeyError:
        raise ValueError(f"unknown oracle {spec!r}")


def generate_instance(params: dict, seed: int):
    """Hidden basis + transformed generators, resampled until the
    transform keeps the ideal computable under the degree cap."""
    ctx = Context(params["p"], params["n"], params.get("order", "degrevlex"))
    rng = random.Random(seed)
    caps = params.get("degree_caps", [2] * ctx.n)
    r = params.get("transform_rows", ctx.n + 1)
    d_a = params.get("transform_degree", 1)
    t_a = params.get("transform_terms", 2)
    max_degree = params.get("degree_cap")
    while True:
        hidden, points = sample_border_basis(ctx, caps, rng)
        gens = backward_transform(hidden, r, d_a, t_a, rng)
        try:
            compute_border_basis(ctx, gens, max_degree=max_degree)
        except DegreeBudgetExceeded:
            continue  # transform lost zero-dimensionality; redraw
        return ctx, gens, hidden, points


def run_variant(ctx, gens, name: str, params: dict):
    base, oracle_spec, eliminator = parse_variant(name)
    config = OracleConfig(
        budget=params.get("oracle_budget", 5),
        gap_threshold=params.get("gap_threshold", 0.9),
        truncation=params.get("truncation", 5),
    )
    max_degree = params.get("degree_cap")
    start = time.perf_counter()
    if oracle_spec is None:
        basis, trace = compute_border_basis(
            ctx, gens, variant=base, eliminator=eliminator,
            max_degree=max_degree,
        )
    else:
        basis, trace = run_obba(
            ctx, gens, make_oracle(oracle_spec, config.truncation),
            config, variant=base, eliminator=eliminator,
            max_degree=max_degree,
        )
    wall = time.perf_counter() - start
    return basis, trace, wall


def trace_metrics(trace: RunTrace, wall: float) -> dict:
    final = trace.final_stage_iterations()
    return {
        "wall_time": wall,
        "multiply_adds": trace.multiply_adds(),
        "zero_reductions": trace.zero_reductions(),
        "wasted_zero_reductions": trace.wasted_zero_reductions(),
        "final_stage_zero_reductions": trace.wasted_zero_reductions(
            final_stage_only=True
        ),
        "final_stage_multiply_adds": sum(r.multiply_adds for r in final),
        "fallbacks": len(trace.fallback_events),
        "enlargements": len(trace.enlargements),
        "oracle_calls": trace.oracle_calls,
        "final_degree": trace.final_degree,
    }


def final_stage_ratio(trace: RunTrace, last_k: int = 5):
    """Final-stage share of elimination ops, plus cumulative shares of
    the last 1..last_k rounds within the final stage."""
    total = trace.multiply_adds()
    final = trace.final_stage_iterations()
    final_ops = sum(r.multiply_adds for r in final)
    share = Fraction(final_ops, total) if total else Fraction(1)
    last_shares = {}
    for k in range(1, last_k + 1):
        ops = sum(r.multiply_adds for r in final[-k:])
        last_shares[k] = Fraction(ops, final_ops) if final_ops else Fraction(1)
    return share, last_shares


def border_gap_trace(trace: RunTrace):
    """(relative gap before each final-stage round, rounds remaining),
    ending with the terminal point at distance 0."""
    final = trace.final_stage_iterations()
    if not final:
        return []
    size_l = final[0].universe_size
    points = []
    for j, rec in enumerate(final):
        before = (
            trace.iterations[rec.index - 1].basis_size if rec.index else 0
        )
        points.append((Fraction(before, size_l), len(final) - j))
    points.append((Fraction(final[-1].basis_size, size_l), 0))
    return points


def worker_count() -> int:
    raw = os.environ.get("BORDERFORGE_THREADS", "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return 1


def bench_instance(params: dict, index: int, master_seed: int,
                   variants=DEFAULT_VARIANTS) -> BenchRecord:
    seed = child_seed(master_seed, index)
    ctx, gens, hidden, points = generate_instance(params, seed)
    record = BenchRecord(instance=index, seed=seed, params=dict(params))
    digests = {}
    for name in variants:
        basis, trace, wall = run_variant(ctx, gens, name, params)
        record.variants[name] = trace_metrics(trace, wall)
        digests[name] = basis_digest(basis)
        if name == "bba" or not record.gap_trace:
            record.gap_trace = [
                (str(g), d) for g, d in border_gap_trace(trace)
            ]
    if len(set(digests.values())) > 1:
        raise VariantDisagreement(f"instance {index}: {digests}")
    record.digest = next(iter(digests.values()))
    return record


def run_benchmark(config: dict):
    """Run every suite in the config; returns (records, summary)."""
    suites = config.get("suite", [config]) if "suite" in config else [config]
    records = []
    for suite in suites:
        params = dict(suite)
        count = params.pop("count", 10)
        master_seed = params.pop("seed", 0)
        variants = tuple(params.pop("variants", DEFAULT_VARIANTS))
        jobs = [
            (params, i, master_seed, variants) for i in range(count)
        ]
        workers = worker_count()
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                records.extend(pool.map(_bench_star, jobs))
        else:
            records.extend(_bench_star(job) for job in jobs)
    return records, summarize(records)


def _bench_star(job):
    return bench_instance(*job)


def summarize(records) -> dict:
    """Per-variant mean and std of the numeric metrics."""
    out = {}
    names = set()
    for r in records:
        names.update(r.variants)
    for name in sorted(names):
        rows = [r.variants[name] for r in records if name in r.variants]
        agg = {}
        for key in rows[0]:
            vals = [row[key] for row in rows]
            mean = sum(vals) / len(vals)
            var = sum((v - mean) ** 2 for v in vals) / len(vals)
            agg[key] = {"mean": mean, "std": var ** 0.5}
        out[name] = agg
    return out


def load_suite(path) -> dict:
    try:
        import tomllib
    except ImportError:
        import tomli as tomllib

    with open(path, "rb") as fh:
        return tomllib.load(fh)
