"""Thin client for a tuning server speaking line-delimited JSON over TCP.

The wrapper holds no search logic: it sends one configuration message,
answers every evaluation request by applying the user's objective to each
candidate (keyword-style), and returns the server's result. Standard
sockets and standard JSON only.
"""

from __future__ import annotations

import json
import math
import socket
from dataclasses import dataclass
from typing import Any, Callable, Mapping

__all__ = [
    "ConnectionFailed",
    "ProtocolError",
    "RemoteResult",
    "RemoteTuner",
    "remote_maximize",
    "remote_minimize",
]


class ProtocolError(Exception):
    """The conversation broke the wire contract or the server reported an error."""


class ConnectionFailed(Exception):
    """The server could not be reached or dropped the connection."""


@dataclass(frozen=True)
class RemoteResult:
    """Contents of the server's terminal result message."""

    best_params: dict[str, float]
    optimum: float
    stats: dict[str, Any]


def _reject_constant(token: str) -> float:
    raise ValueError(f"non-finite JSON constant {token!r} not allowed")


def _encode(payload: Mapping[str, Any]) -> bytes:
    return (
        json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode("utf-8")
        + b"\n"
    )


def _decode(line: bytes) -> dict[str, Any]:
    try:
        msg = json.loads(line.decode("utf-8"), parse_constant=_reject_constant)
    except (UnicodeDecodeError, ValueError) as exc:
        raise ProtocolError(f"malformed server line {line!r}: {exc}") from None
    if not isinstance(msg, dict):
        raise ProtocolError(f"malformed server line {line!r}: not a JSON object")
    return msg


def _field(msg: Mapping[str, Any], name: str, what: str) -> Any:
    if name not in msg:
        raise ProtocolError(f"{what} missing field {name!r}")
    return msg[name]


def _apply(objective: Callable[..., float], candidate: Mapping[str, float]) -> float | dict:
    """One local evaluation; any failure becomes an error value, not a crash."""
    try:
        value = float(objective(**candidate))
    except Exception as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}
    if not math.isfinite(value):
        return {"error": f"non-finite objective value {value!r}"}
    return value


@dataclass
class RemoteTuner:
    """Client endpoint for one tuning server.

    The server runs one tuning session per connection and closes it after
    the result, so every :meth:`run` call opens a fresh connection.
    """

    host: str
    port: int
    timeout: float = 30.0

    def run(
        self,
        objective: Callable[..., float],
        space: Mapping[str, tuple[float, float]],
        direction: str,
        num_evals: int,
        solver: str | None = None,
        settings: Mapping[str, Any] | None = None,
        seed: int = 0,
    ) -> RemoteResult:
        config = {
            "solver": "pso" if solver is None else solver,
            "settings": dict(settings) if settings else {},
            "space": {name: [float(b[0]), float(b[1])] for name, b in space.items()},
            "direction": direction,
            "max_evals": int(num_evals),
            "seed": int(seed),
        }
        try:
            sock = socket.create_connection((self.host, self.port), timeout=self.timeout)
        except OSError as exc:
            raise ConnectionFailed(f"cannot connect to {self.host}:{self.port}: {exc}") from None
        try:
            sock.settimeout(self.timeout)
            sock.sendall(_encode(config))
            buffer = b""
            while True:
                line, buffer = self._read_line(sock, buffer)
                msg = _decode(line)
                if "candidates" in msg:
                    values = [
                        _apply(objective, c)
                        for c in _field(msg, "candidates", "evaluation request")
                    ]
                    reply = {
                        "request_id": _field(msg, "request_id", "evaluation request"),
                        "values": values,
                    }
                    sock.sendall(_encode(reply))
                elif "solution" in msg:
                    return RemoteResult(
                        best_params=dict(_field(msg, "solution", "result")),
                        optimum=float(_field(msg, "optimum", "result")),
                        stats=dict(_field(msg, "stats", "result")),
                    )
                elif "error" in msg:
                    raise ProtocolError(f"server error: {msg['error']}")
                else:
                    raise ProtocolError(
                        f"cannot interpret server message with keys {list(msg)}"
                    )
        finally:
            sock.close()

    def _read_line(self, sock: socket.socket, buffer: bytes) -> tuple[bytes, bytes]:
        while b"\n" not in buffer:
            try:
                chunk = sock.recv(65536)
            except TimeoutError:
                raise ConnectionFailed(
                    f"no server message within {self.timeout} seconds"
                ) from None
            except OSError as exc:
                raise ConnectionFailed(f"connection lost: {exc}") from None
            if not chunk:
                raise ConnectionFailed("server closed the connection")
            buffer += chunk
        line, rest = buffer.split(b"\n", 1)
        return line, rest


def remote_maximize(
    objective: Callable[..., float],
    space: Mapping[str, tuple[float, float]],
    *,
    port: int,
    host: str = "127.0.0.1",
    num_evals: int = 100,
    solver: str | None = None,
    settings: Mapping[str, Any] | None = None,
    seed: int = 0,
    timeout: float = 30.0,
) -> RemoteResult:
    """Ask a running server for the highest score of ``objective`` over the box."""
    tuner = RemoteTuner(host, port, timeout)
    return tuner.run(objective, space, "maximize", num_evals, solver, settings, seed)


def remote_minimize(
    objective: Callable[..., float],
    space: Mapping[str, tuple[float, float]],
    *,
    port: int,
    host: str = "127.0.0.1",
    num_evals: int = 100,
    solver: str | None = None,
    settings: Mapping[str, Any] | None = None,
    seed: int = 0,
    timeout: float = 30.0,
) -> RemoteResult:
    """Ask a running server for the lowest score of ``objective`` over the box."""
    tuner = RemoteTuner(host, port, timeout)
    return tuner.run(objective, space, "minimize", num_evals, solver, settings, seed)
