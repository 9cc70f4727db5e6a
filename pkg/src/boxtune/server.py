"""TCP engine server for the line-delimited JSON protocol.

The engine listens; an external environment connects, sends one
ConfigMsg, answers EvalRequests until the solver stops, and receives a
ResultMsg (or an ErrorMsg on any protocol violation). One tuning run
per connection. Candidates violating ConfigMsg constraints are recorded
locally as failed evaluations and never cross the wire.
"""

from __future__ import annotations

import socket
import threading
from typing import Iterable

from .api import run_optimization
from .batch import BatchRequest, BatchResult, EvalFailure
from .constraints import Constraint, check
from .core import OptimizationResult
from .errors import (
    BoxtuneError,
    BudgetExhaustedWithNoSuccess,
    MalformedJson,
    PeerClosed,
    SchemaViolation,
    Timeout,
)
from .protocol import (
    ConfigMsg,
    ErrorMsg,
    EvalReply,
    EvalRequest,
    ProtocolMessage,
    ResultMsg,
    decode,
    encode,
)
from .solvers import SolverConfig
from .space import make_space

DEFAULT_REPLY_TIMEOUT = 300.0


class LineChannel:
    """Blocking line-framed message transport over a connected socket."""

    def __init__(self, sock: socket.socket, timeout: float = DEFAULT_REPLY_TIMEOUT) -> None:
        self._sock = sock
        self._timeout = timeout
        sock.settimeout(timeout)
        self._buffer = b""

    def send(self, msg: ProtocolMessage) -> None:
        try:
            self._sock.sendall(encode(msg))
        except OSError as exc:
            raise PeerClosed(f"send failed: {exc}") from None

    def recv_line(self) -> bytes:
        while b"\n" not in self._buffer:
            try:
                chunk = self._sock.recv(65536)
            except TimeoutError:
                raise Timeout(
                    f"no message within {self._timeout} seconds"
                ) from None
            except OSError as exc:
                raise PeerClosed(f"receive failed: {exc}") from None
            if not chunk:
                raise PeerClosed("peer closed the connection")
            self._buffer += chunk
        line, self._buffer = self._buffer.split(b"\n", 1)
        return line + b"\n"

    def recv(self) -> ProtocolMessage:
        return decode(self.recv_line())

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


class _RemoteBatchEvaluator:
    """Proxies whole candidate batches as single EvalRequests."""

    def __init__(self, channel: LineChannel, constraints: Iterable[Constraint]) -> None:
        self._channel = channel
        self._constraints = tuple(constraints)
        self._next_request_id = 0

    def __call__(self, request: BatchRequest) -> BatchResult:
        outcomes: list[float | EvalFailure | None] = [None] * len(request.candidates)
        wire_slots: list[int] = []
        wire_params: list[dict[str, float]] = []
        for i, p in enumerate(request.candidates):
            violated = check(self._constraints, p)
            if violated:
                c = violated[0]
                outcomes[i] = EvalFailure(
                    f"constraint violated: {c.dim} {c.kind} {list(c.bounds)}"
                )
            else:
                wire_slots.append(i)
                wire_params.append(p.as_dict())
        if wire_params:
            request_id = self._next_request_id
            self._next_request_id += 1
            self._channel.send(EvalRequest(request_id, tuple(wire_params)))
            reply = self._channel.recv()
            if not isinstance(reply, EvalReply):
                raise SchemaViolation("unexpected message in phase solving")
            if reply.request_id != request_id:
                raise SchemaViolation(
                    f"EvalReply request_id {reply.request_id} does not match "
                    f"outstanding request {request_id}"
                )
            if len(reply.values) != len(wire_params):
                raise SchemaViolation(
                    f"EvalReply has {len(reply.values)} values for "
                    f"{len(wire_params)} candidates"
                )
            for slot, value in zip(wire_slots, reply.values):
                outcomes[slot] = value
        return BatchResult(tuple(outcomes))


def _send_error(channel: LineChannel, text: str) -> None:
    try:
        channel.send(ErrorMsg(text))
    except BoxtuneError:
        pass


def serve_session(channel: LineChannel) -> str:
    """Run one tuning session; returns the terminal phase, done or failed."""
    try:
        first = channel.recv()
    except (MalformedJson, SchemaViolation) as exc:
        _send_error(channel, str(exc))
        return "failed"
    except (Timeout, PeerClosed):
        return "failed"
    if not isinstance(first, ConfigMsg):
        _send_error(channel, "unexpected message in phase awaiting_config")
        return "failed"

    try:
        space = make_space(first.space)
        config = SolverConfig(first.solver, dict(first.settings))
    except (BoxtuneError, ValueError) as exc:
        _send_error(channel, str(exc))
        return "failed"

    evaluator = _RemoteBatchEvaluator(channel, first.constraints)
    try:
        result: OptimizationResult = run_optimization(
            config,
            space,
            first.direction,
            first.max_evals,
            seed=first.seed,
            evaluator=evaluator,
        )
    except PeerClosed:
        return "failed"
    except (Timeout, MalformedJson, SchemaViolation, BudgetExhaustedWithNoSuccess) as exc:
        _send_error(channel, str(exc))
        return "failed"

    try:
        channel.send(
            ResultMsg(
                result.best_params.as_dict(),
                result.best_score,
                result.num_evals,
                result.wall_time,
            )
        )
    except PeerClosed:
        return "failed"
    return "done"


class TuningServer:
    """Accepts connections and runs one session per connection."""

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        reply_timeout: float = DEFAULT_REPLY_TIMEOUT,
    ) -> None:
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen()
        self._listener.settimeout(0.2)
        self.host, self.port = self._listener.getsockname()[:2]
        self.reply_timeout = reply_timeout
        self._stop = threading.Event()

    def _handle(self, conn: socket.socket) -> None:
        channel = LineChannel(conn, self.reply_timeout)
        try:
            serve_session(channel)
        finally:
            channel.close()

    def serve_forever(self) -> None:
        """Accept until :meth:`shutdown`; one daemon thread per session."""
        try:
            while not self._stop.is_set():
                try:
                    conn, _ = self._listener.accept()
                except TimeoutError:
                    continue
                except OSError:
                    break
                thread = threading.Thread(
                    target=self._handle, args=(conn,), daemon=True
                )
                thread.start()
        finally:
            self._listener.close()

    def shutdown(self) -> None:
        self._stop.set()

    def __enter__(self) -> "TuningServer":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.shutdown()
