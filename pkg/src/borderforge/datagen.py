"""Supervised-sample extraction and token serialization.

A training sample freezes what the oracle saw (universe corner terms and
the truncated basis) together with what the hindsight labels said.  Two
token schemes serialize that content: the infix scheme spells each
monomial out as coefficient and exponent tokens, the monomial scheme
packs a whole monomial into one composite token.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .algebra import Context, Polynomial
from .errors import SchemaError

MARKERS = ("+", "<sep>", "<supsep>", "<eos>")


def truncate(f: Polynomial, l: int) -> Polynomial:
    """Keep the l greatest terms of f."""
    if l < 1:
        raise ValueError("truncation must keep at least one term")
    if len(f.items) <= l:
        return f
    return Polynomial(f.ctx, _sorted_items=f.items[:l])


@dataclass
class TrainingSample:
    """One oracle exchange, in wire-protocol field shapes."""

    p: int
    n: int
    l: int
    universe_corners: list  # [[e1..en], ...]
    generators: list  # [[[c, [e1..en]], ...], ...]
    labels: list = field(default_factory=list)  # [[var, [e1..en]], ...]

    @property
    def is_terminal(self) -> bool:
        return not self.labels

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "l": self.l,
            "universe_corners": self.universe_corners,
            "generators": self.generators,
            "labels": [[v, list(t)] for v, t in self.labels],
            "is_terminal": self.is_terminal,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrainingSample":
        sample = cls(
            p=int(data["p"]),
            n=int(data["n"]),
            l=int(data["l"]),
            universe_corners=[list(map(int, t)) for t in data["universe_corners"]],
            generators=[
                [[int(c), list(map(int, t))] for c, t in poly]
                for poly in data["generators"]
            ],
            labels=[(int(v), tuple(map(int, t))) for v, t in data["labels"]],
        )
        if bool(data.get("is_terminal", sample.is_terminal)) != sample.is_terminal:
            raise ValueError("is_terminal flag contradicts labels")
        return sample


def extract_samples(
    ctx: Context,
    generators,
    last_k: int = 5,
    truncation: int = 5,
    gap_threshold: float = 0.9,
    max_degree: int = None,
):
    """Run with a recording hindsight oracle and keep the tail samples.

    Returns (samples, basis, trace).  The oracle drives every expansion
    past the gap gate, so its exchange log covers the whole final stage;
    the last exchange has empty labels and becomes the terminal sample.
    Only the ``last_k`` exchanges before it are kept.
    """
    from .obba import (
        OracleConfig,
        PerfectOracle,
        RecordingOracle,
        run_obba,
    )

    oracle = RecordingOracle(PerfectOracle(), truncation)
    config = OracleConfig(
        budget=1 << 30, gap_threshold=gap_threshold, truncation=truncation
    )
    basis, trace = run_obba(
        ctx, generators, oracle, config, max_degree=max_degree
    )
    samples = []
    for fields, pairs in oracle.log:
        samples.append(
            TrainingSample(
                p=fields["p"],
                n=fields["n"],
                l=fields["l"],
                universe_corners=fields["universe_corners"],
                generators=fields["generators"],
                labels=[(v, tuple(t)) for v, t in pairs],
            )
        )
    terminal = [s for s in samples if s.is_terminal][-1:]
    labeled = [s for s in samples if not s.is_terminal]
    kept = labeled[len(labeled) - last_k:] if last_k > 0 else []
    return kept + terminal, basis, trace


# --- infix tokens ---

def tokenize_infix(sample: TrainingSample) -> list:
    """Flat token strings; set order is preserved as given."""
    tokens = []
    corners = sample.universe_corners
    for i, t in enumerate(corners):
        tokens.append("C1")
        tokens.extend(f"E{e}" for e in t)
        tokens.append("<sep>" if i + 1 < len(corners) else "<supsep>")
    if not corners:
        tokens.append("<supsep>")
    gens = sample.generators
    for gi, poly in enumerate(gens):
        last_poly = gi + 1 == len(gens)
        for mi, (c, t) in enumerate(poly):
            tokens.append(f"C{c}")
            tokens.extend(f"E{e}" for e in t)
            if mi + 1 < len(poly):
                tokens.append("+")
            else:
                tokens.append("<eos>" if last_poly else "<sep>")
    if not gens:
        tokens.append("<eos>")
    return tokens


def decode_infix(tokens):
    """Inverse of tokenize_infix; returns (universe_corners, generators)."""
    corners = []
    generators = []
    in_corners = True
    poly = []
    monomial = None
    for tok in tokens:
        if tok.startswith("C") and tok not in MARKERS:
            monomial = [int(tok[1:]), []]
        elif tok.startswith("E"):
            if monomial is None:
                raise ValueError("exponent token outside a monomial")
            monomial[1].append(int(tok[1:]))
        elif tok in MARKERS:
            if monomial is not None:
                poly.append(monomial)
                monomial = None
            if tok == "+":
                continue
            if in_corners:
                if poly:
                    corners.append(poly[0][1])
                poly = []
                if tok == "<supsep>":
                    in_corners = False
            else:
                if poly:
                    generators.append(poly)
                poly = []
                if tok == "<eos>":
                    break
        else:
            raise ValueError(f"unknown token {tok!r}")
    return corners, generators


# --- monomial-level tokens ---

def tokenize_monomial(sample: TrainingSample) -> list:
    """One composite token (coefficient, exponents, follow-up marker)
    per monomial; a bare marker stands in for an empty set."""
    tokens = []
    corners = sample.universe_corners
    for i, t in enumerate(corners):
        follow = "<sep>" if i + 1 < len(corners) else "<supsep>"
        tokens.append((1, tuple(t), follow))
    if not corners:
        tokens.append((None, None, "<supsep>"))
    gens = sample.generators
    for gi, poly in enumerate(gens):
        last_poly = gi + 1 == len(gens)
        for mi, (c, t) in enumerate(poly):
            if mi + 1 < len(poly):
                follow = "+"
            else:
                follow = "<eos>" if last_poly else "<sep>"
            tokens.append((c, tuple(t), follow))
    if not gens:
        tokens.append((None, None, "<eos>"))
    return tokens


def decode_monomial(tokens):
    corners = []
    generators = []
    in_corners = True
    poly = []
    for c, t, follow in tokens:
        if c is not None:
            poly.append([c, list(t)])
        if follow == "+":
            continue
        if in_corners:
            if poly:
                corners.append(poly[0][1])
            poly = []
            if follow == "<supsep>":
                in_corners = False
        else:
            if poly:
                generators.append(poly)
            poly = []
            if follow == "<eos>":
                break
    return corners, generators


def monomial_to_infix(tokens) -> list:
    out = []
    for c, t, follow in tokens:
        if c is not None:
            out.append(f"C{c}")
            out.extend(f"E{e}" for e in t)
        out.append(follow)
    return out


def infix_to_monomial(tokens) -> list:
    out = []
    coeff = None
    exps = []
    for tok in tokens:
        if tok in MARKERS:
            if coeff is None:
                out.append((None, None, tok))
            else:
                out.append((coeff, tuple(exps), tok))
            coeff, exps = None, []
        elif tok.startswith("C"):
            coeff = int(tok[1:])
            exps = []
        elif tok.startswith("E"):
            exps.append(int(tok[1:]))
        else:
            raise ValueError(f"unknown token {tok!r}")
    return out


# --- dataset files ---

def write_dataset(path, samples) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_json(), separators=(",", ":")) + "\n")


def read_dataset(path):
    samples = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                samples.append(TrainingSample.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise SchemaError(
                    f"bad sample on line {lineno}: {exc}", line_number=lineno
                )
    return samples
