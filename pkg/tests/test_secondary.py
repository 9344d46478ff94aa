"""Conformance tests for the external oracle server in frontend/.

The server speaks the line-delimited JSON wire protocol over TCP.  With
a replay backend it must be indistinguishable from the in-process
replay oracle: same predictions at the same states, hence identical
traces and bases, and a response log that matches the expected wire
bytes exactly.  These tests are skipped when the server has not been
built, so the rest of the suite has no Node dependency.
"""

import json
import shutil
import socket
import subprocess
import time
from pathlib import Path

import pytest

from borderforge.algebra import Context
from borderforge.bench import basis_digest
from borderforge.datagen import TrainingSample, write_dataset
from borderforge.errors import DegreeBudgetExceeded
from borderforge.obba import (
    ExternalOracle,
    OracleConfig,
    PerfectOracle,
    RecordingOracle,
    ReplayOracle,
    run_obba,
)
from borderforge.sampling import backward_transform, child_seed, sample_border_basis

import random

SERVER = Path(__file__).resolve().parent.parent / "frontend" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    not SERVER.exists() or shutil.which("node") is None,
    reason="oracle server not built (run tsc in frontend/)",
)

N_INSTANCES = 50
CONFIG = OracleConfig(budget=1 << 30, gap_threshold=0.9, truncation=5)


def candidate_instances():
    k = 0
    while True:
        rng = random.Random(child_seed(11000, k))
        k += 1
        ctx = Context(31, 2)
        hidden, _ = sample_border_basis(ctx, (2, 2), rng)
        gens = backward_transform(hidden, 3, 1, 2, rng)
        yield ctx, gens


def free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def start_server(args, port):
    proc = subprocess.Popen(
        ["node", str(SERVER), *args],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    deadline = time.monotonic() + 10.0
    while time.monotonic() < deadline:
        if proc.poll() is not None:
            raise RuntimeError(f"server exited: {proc.stderr.read().decode()}")
        try:
            socket.create_connection(("127.0.0.1", port), timeout=0.2).close()
            return proc
        except OSError:
            time.sleep(0.05)
    proc.kill()
    raise RuntimeError("server did not start listening")


def stop_server(proc):
    proc.terminate()
    proc.wait(timeout=10)


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """Record every oracle exchange of 50 runs into one dataset file."""
    pairs = []
    samples = []
    draw = candidate_instances()
    while len(pairs) < N_INSTANCES:
        ctx, gens = next(draw)
        oracle = RecordingOracle(PerfectOracle(), CONFIG.truncation)
        try:
            run_obba(ctx, gens, oracle, CONFIG)
        except DegreeBudgetExceeded:
            continue
        pairs.append((ctx, gens))
        for fields, labels in oracle.log:
            samples.append(
                TrainingSample(
                    p=fields["p"],
                    n=fields["n"],
                    l=fields["l"],
                    universe_corners=fields["universe_corners"],
                    generators=fields["generators"],
                    labels=[(v, tuple(t)) for v, t in labels],
                )
            )
    path = tmp_path_factory.mktemp("corpus") / "samples.jsonl"
    write_dataset(path, samples)
    return pairs, path


def test_replay_server_matches_builtin_replay(corpus, tmp_path):
    pairs, dataset = corpus

    builtin = RecordingOracle(
        ReplayOracle.from_file(dataset, CONFIG.truncation), CONFIG.truncation
    )
    reference = [run_obba(ctx, gens, builtin, CONFIG) for ctx, gens in pairs]

    port = free_port()
    log_path = tmp_path / "responses.log"
    proc = start_server(
        [
            "--transport",
            f"127.0.0.1:{port}",
            "--backend",
            f"replay:{dataset}",
            "--log",
            str(log_path),
        ],
        port,
    )
    try:
        remote = ExternalOracle(f"127.0.0.1:{port}", CONFIG.truncation)
        external = [run_obba(ctx, gens, remote, CONFIG) for ctx, gens in pairs]
        remote.close()
    finally:
        stop_server(proc)

    for (basis_b, trace_b), (basis_e, trace_e) in zip(reference, external):
        assert basis_digest(basis_b) == basis_digest(basis_e)
        assert trace_b == trace_e

    expected = b"".join(
        json.dumps(
            {"id": i, "pairs": [[v, list(t)] for v, t in labels]},
            separators=(",", ":"),
        ).encode()
        + b"\n"
        for i, (_, labels) in enumerate(builtin.log)
    )
    assert log_path.read_bytes() == expected


def exchange(sock_file, sock, line):
    sock.sendall(line.encode() + b"\n")
    return json.loads(sock_file.readline())


def test_malformed_requests_get_error_responses(corpus):
    _, dataset = corpus
    port = free_port()
    proc = start_server(
        ["--transport", f"127.0.0.1:{port}", "--backend", f"replay:{dataset}"],
        port,
    )
    try:
        with socket.create_connection(("127.0.0.1", port), timeout=5) as sock:
            fh = sock.makefile("rb")

            out = exchange(fh, sock, "this is not json")
            assert out == {"id": None, "pairs": [], "error": "invalid JSON"}

            out = exchange(fh, sock, json.dumps({"id": 7, "p": 31}))
            assert out["id"] == 7
            assert out["pairs"] == []
            assert out["error"]

            unseen = {
                "id": 8,
                "p": 31,
                "n": 2,
                "l": 5,
                "universe_corners": [[9, 9]],
                "generators": [[[1, [9, 9]]]],
            }
            out = exchange(fh, sock, json.dumps(unseen))
            assert out == {"id": 8, "pairs": [], "error": "unknown state"}

            # unknown request fields are ignored, service continues
            unseen["id"] = 9
            unseen["extra"] = {"nested": True}
            out = exchange(fh, sock, json.dumps(unseen))
            assert out["id"] == 9
    finally:
        stop_server(proc)
