"""Wrapper conformance against the frozen golden transcript and test doubles.

A replay server feeds the recorded server lines and checks every byte the
wrapper sends against the recorded client lines, so the wrapper's message
encoding is pinned down exactly, not just structurally.
"""

import json
import pathlib
import socket
import threading

import pytest

from boxtune_client import ProtocolError, remote_minimize

GOLDEN = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data" / "golden_grid_session.jsonl"


def load_transcript():
    return [json.loads(line) for line in GOLDEN.read_text().splitlines()]


class ScriptedServer:
    """One-connection server that plays back scripted lines.

    Entries are (dir, bytes) pairs: ``s2c`` lines are sent verbatim,
    ``c2s`` lines are what the client must produce, byte-for-byte.
    """

    def __init__(self, script):
        self.script = script
        self.mismatches = []
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self.sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self.sock.bind(("127.0.0.1", 0))
        self.sock.listen(1)
        self.port = self.sock.getsockname()[1]
        self.thread = threading.Thread(target=self._serve, daemon=True)
        self.thread.start()

    def _serve(self):
        conn, _ = self.sock.accept()
        conn.settimeout(10.0)
        buffer = b""
        try:
            for direction, payload in self.script:
                if direction == "s2c":
                    conn.sendall(payload)
                    continue
                while b"\n" not in buffer:
                    chunk = conn.recv(65536)
                    if not chunk:
                        self.mismatches.append(("connection closed", payload))
                        return
                    buffer += chunk
                line, buffer = buffer.split(b"\n", 1)
                if line + b"\n" != payload:
                    self.mismatches.append((line + b"\n", payload))
        finally:
            conn.close()
            self.sock.close()

    def join(self):
        self.thread.join(timeout=10.0)


def test_golden_transcript_byte_for_byte():
    script = [(e["dir"], e["line"].encode()) for e in load_transcript()]
    server = ScriptedServer(script)

    def objective(x):
        return (x - 2.5) ** 2

    result = remote_minimize(
        objective,
        {"x": (0, 10)},
        port=server.port,
        num_evals=5,
        solver="grid",
        settings={"points_per_dim": 5},
        seed=0,
    )
    server.join()
    assert server.mismatches == []
    golden_result = json.loads(load_transcript()[-1]["line"])
    assert result.best_params == golden_result["solution"]
    assert result.optimum == golden_result["optimum"]
    assert result.stats == golden_result["stats"]


def scripted_failure(extra_s2c_lines, **kwargs):
    """Run the wrapper against a double that goes off script after config."""
    config = load_transcript()[0]
    script = [(config["dir"], config["line"].encode())]
    script += [("s2c", line) for line in extra_s2c_lines]
    server = ScriptedServer(script)
    try:
        return remote_minimize(
            lambda x: (x - 2.5) ** 2,
            {"x": (0, 10)},
            port=server.port,
            num_evals=5,
            solver="grid",
            settings={"points_per_dim": 5},
            seed=0,
            **kwargs,
        )
    finally:
        server.join()


def test_malformed_server_line_names_the_line():
    with pytest.raises(ProtocolError, match=r"malformed server line b'not json&'"):
        scripted_failure([b"not json&\n"])


def test_non_finite_constant_rejected():
    with pytest.raises(ProtocolError, match="non-finite JSON constant 'NaN'"):
        scripted_failure([b'{"optimum":NaN,"solution":{"x":1.0},"stats":{}}\n'])


def test_server_error_message_is_surfaced():
    with pytest.raises(ProtocolError, match="server error: evaluation budget empty"):
        scripted_failure([b'{"error":"evaluation budget empty"}\n'])


def test_unclassifiable_message_rejected():
    with pytest.raises(ProtocolError, match=r"cannot interpret server message with keys \['surprise'\]"):
        scripted_failure([b'{"surprise":1}\n'])


def test_missing_field_in_request_rejected():
    with pytest.raises(ProtocolError, match="evaluation request missing field 'request_id'"):
        scripted_failure([b'{"candidates":[{"x":1.0}]}\n'])
