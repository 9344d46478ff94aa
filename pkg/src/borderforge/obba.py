"""Oracle-guided expansion: oracle contracts and builtin implementations.

An oracle looks at the current universe and basis and proposes pairs
(variable index, leading term); the engine multiplies the named basis
element by the named variable instead of expanding everything.  Budget,
gap gating, and the certification sweep live in the engine; this module
supplies the oracles and the run front end.

Builtin oracles: perfect (hindsight simulation), empty, trivial-full,
replay (from a recorded dataset), external (wire protocol client).
"""

from __future__ import annotations

import json
import socket
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .algebra import Context, Polynomial
from .bba import BBAEngine, BorderBasis, EngineState, RunTrace
from .errors import OracleUnavailable
from .linalg import ReducerSet


class ExpansionPair(NamedTuple):
    """One proposed product: multiply the element led by target_lt by
    variable number variable_index (1-based)."""

    variable_index: int
    target_lt: tuple


@dataclass(frozen=True)
class OracleConfig:
    budget: int = 5  # oracle calls allowed per final-stage attempt
    gap_threshold: float = 0.9  # min |V|/|L| before consulting
    truncation: int = 5  # leading terms sent per polynomial

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if not 0 < self.gap_threshold <= 1:
            raise ValueError("gap threshold must lie in (0, 1]")
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")


def relative_border_gap(reducers, uni) -> Fraction:
    """|V| / |L| as an exact rational."""
    if len(uni) == 0:
        return Fraction(0)
    return Fraction(len(reducers), len(uni))


def perfect_oracle_labels(ctx: Context, reducers: ReducerSet, degree: int):
    """Hindsight labels: which products a full expansion round would keep.

    Simulates one expand + extension pass on a copy of the basis, in the
    same deterministic order the engine uses, and records the pairs whose
    candidates produced new basis elements.
    """
    clone = reducers.clone()
    labels = []
    for v in reducers.polynomials():
        if v.degree() + 1 > degree:
            continue
        lt = v.leading_term
        for j in range(1, ctx.n + 1):
            if clone.insert(v.shift(ctx.variable_term(j))) is not None:
                labels.append(ExpansionPair(j, lt))
    return labels


# --- serialization shared with the wire protocol and the dataset format ---

def serialize_polynomial(f: Polynomial, truncation: int = None):
    items = f.items if truncation is None else f.items[:truncation]
    return [[c, list(t)] for t, c in items]


def deserialize_polynomial(ctx: Context, data) -> Polynomial:
    return Polynomial(ctx, {tuple(t): c for c, t in data})


def request_fields(state: EngineState, truncation: int) -> dict:
    """The oracle-visible view of an engine state, in canonical order."""
    return {
        "p": state.ctx.p,
        "n": state.ctx.n,
        "l": truncation,
        "universe_corners": [list(t) for t in state.uni.corner_terms()],
        "generators": [
            serialize_polynomial(v, truncation)
            for v in state.reducers.polynomials()
        ],
    }


def state_key(fields: dict) -> str:
    """Canonical replay-lookup key: the serialized oracle-visible state."""
    return json.dumps(
        [fields["universe_corners"], fields["generators"]],
        separators=(",", ":"),
    )


def decode_pairs(data):
    pairs = []
    for entry in data:
        var, term = entry
        pairs.append(ExpansionPair(int(var), tuple(int(e) for e in term)))
    return pairs


# --- oracles ---

class EmptyOracle:
    """Always claims nothing is worth expanding."""

    def predict(self, state):
        return []


class FullOracle:
    """Proposes every product; degenerates to plain full expansion."""

    def predict(self, state):
        return [
            ExpansionPair(j, v.leading_term)
            for v in state.reducers.polynomials()
            for j in range(1, state.ctx.n + 1)
        ]


class PerfectOracle:
    """Hindsight oracle: labels computed by simulating a full round."""

    def predict(self, state):
        return perfect_oracle_labels(
            state.ctx, state.reducers, state.uni.max_degree()
        )


class ReplayOracle:
    """Exact-match replay of recorded samples; unseen states get no pairs."""

    def __init__(self, samples, truncation: int):
        self.truncation = truncation
        self.index = {}
        for s in samples:
            fields = {
                "universe_corners": [list(t) for t in s.universe_corners],
                "generators": list(s.generators),
            }
            self.index[state_key(fields)] = [
                ExpansionPair(v, tuple(t)) for v, t in s.labels
            ]

    @classmethod
    def from_file(cls, path, truncation: int = 5):
        from .datagen import read_dataset

        return cls(read_dataset(path), truncation)

    def predict(self, state):
        key = state_key(request_fields(state, self.truncation))
        return self.index.get(key, [])


class RecordingOracle:
    """Wraps an oracle and keeps every (request, response) exchange."""

    def __init__(self, inner, truncation: int):
        self.inner = inner
        self.truncation = truncation
        self.log = []

    def predict(self, state):
        fields = request_fields(state, self.truncation)
        pairs = self.inner.predict(state)
        self.log.append((fields, list(pairs)))
        return pairs


class ExternalOracle:
    """Wire protocol client: line-delimited JSON over a TCP socket.

    Any transport error, malformed response, or id mismatch raises
    OracleUnavailable; the engine then expands normally without spending
    budget.
    """

    def __init__(self, address: str, truncation: int = 5, timeout: float = 10.0):
        host, _, port = address.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(f"expected HOST:PORT, got {address!r}")
        self.address = (host, int(port))
        self.truncation = truncation
        self.timeout = timeout
        self._sock = None
        self._reader = None
        self._next_id = 0

    def _connect(self):
        if self._sock is None:
            self._sock = socket.create_connection(
                self.address, timeout=self.timeout
            )
            self._reader = self._sock.makefile("rb")

    def close(self):
        if self._sock is not None:
            try:
                self._reader.close()
                self._sock.close()
            except OSError:
                pass
            self._sock = None
            self._reader = None

    def predict(self, state):
        fields = request_fields(state, self.truncation)
        request = {"id": self._next_id, **fields}
        self._next_id += 1
        try:
            self._connect()
            self._sock.sendall(
                json.dumps(request, separators=(",", ":")).encode() + b"\n"
            )
            line = self._reader.readline()
        except OSError as exc:
            self.close()
            raise OracleUnavailable(f"oracle transport failed: {exc}")
        if not line:
            self.close()
            raise OracleUnavailable("oracle closed the connection")
        try:
            response = json.loads(line)
            if response["id"] != request["id"]:
                raise OracleUnavailable(
                    f"response id {response['id']} for request {request['id']}"
                )
            return decode_pairs(response["pairs"])
        except OracleUnavailable:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise OracleUnavailable(f"malformed oracle response: {exc}")


ORACLES = {
    "perfect": PerfectOracle,
    "empty": EmptyOracle,
    "full": FullOracle,
}


def run_obba(
    ctx: Context,
    generators,
    oracle,
    config: OracleConfig = None,
    variant: str = "ibba",
    eliminator: str = "fge",
    max_degree: int = None,
):
    """Oracle-guided run; same output contract as compute_border_basis."""
    config = config or OracleConfig()
    engine = BBAEngine(
        ctx,
        generators,
        variant=variant,
        eliminator=eliminator,
        max_degree=max_degree,
        oracle=oracle,
        oracle_tau=config.gap_threshold,
        oracle_budget=config.budget,
    )
    basis = engine.run()
    return basis, engine.trace
