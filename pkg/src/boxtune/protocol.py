"""Line-delimited JSON protocol messages.

One UTF-8 JSON object per newline-terminated line. Messages are
discriminated by their top-level keys:

- ConfigMsg    {solver, settings, space, constraints?, direction, max_evals, seed}
- EvalRequest  {request_id, candidates}
- EvalReply    {request_id, values}
- ResultMsg    {solution, optimum, stats: {num_evals, time}}
- ErrorMsg     {error}

Encoding is canonical (sorted keys, no whitespace) and rejects NaN and
infinity in both directions; evaluation failures travel as
``{"error": ...}`` values instead. Schema violations name the offending
field. All validity is checked at construction, so every encodable
message decodes back to an equal message.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .batch import EvalFailure
from .constraints import Constraint
from .errors import MalformedJson, SchemaViolation

DIRECTIONS = ("maximize", "minimize")


def _require_keys(obj: Mapping[str, Any], required: set[str], optional: set[str], what: str) -> None:
    keys = set(obj)
    missing = required - keys
    if missing:
        raise SchemaViolation(f"{what} missing field {sorted(missing)[0]!r}")
    extra = keys - required - optional
    if extra:
        raise SchemaViolation(f"{what} has unknown field {sorted(extra)[0]!r}")


def _check_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(f"{where} must be a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise SchemaViolation(f"{where} must be finite")
    return v


def _check_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaViolation(f"{where} must be an integer, got {type(value).__name__}")
    return value


def _check_str(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(f"{where} must be a string, got {type(value).__name__}")
    return value


def _check_params(obj: Any, where: str) -> dict[str, float]:
    if not isinstance(obj, Mapping):
        raise SchemaViolation(f"{where} must be an object of name -> number")
    out = {}
    for name, value in obj.items():
        out[_check_str(name, f"{where} key")] = _check_number(value, f"{where}[{name!r}]")
    return out


@dataclass(frozen=True)
class ConfigMsg:
    solver: str
    settings: dict[str, Any]
    space: dict[str, tuple[float, float]]
    direction: str
    max_evals: int
    seed: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        _check_str(self.solver, "solver")
        if not isinstance(self.settings, Mapping):
            raise SchemaViolation("settings must be an object")
        object.__setattr__(self, "settings", dict(self.settings))
        if not isinstance(self.space, Mapping) or not self.space:
            raise SchemaViolation("space must be a nonempty object")
        space = {}
        for name, pair in self.space.items():
            _check_str(name, "space key")
            if not isinstance(pair, Sequence) or isinstance(pair, (str, bytes)) or len(pair) != 2:
                raise SchemaViolation(f"space[{name!r}] must be a [lower, upper] pair")
            space[name] = (
                _check_number(pair[0], f"space[{name!r}][0]"),
                _check_number(pair[1], f"space[{name!r}][1]"),
            )
        object.__setattr__(self, "space", space)
        if self.direction not in DIRECTIONS:
            raise SchemaViolation(f"direction must be one of {list(DIRECTIONS)}")
        if _check_int(self.max_evals, "max_evals") < 1:
            raise SchemaViolation("max_evals must be >= 1")
        _check_int(self.seed, "seed")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if not isinstance(c, Constraint):
                raise SchemaViolation("constraints must be Constraint values")

    def to_payload(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "solver": self.solver,
            "settings": self.settings,
            "space": {name: [lo, hi] for name, (lo, hi) in self.space.items()},
            "direction": self.direction,
            "max_evals": self.max_evals,
            "seed": self.seed,
        }
        if self.constraints:
            payload["constraints"] = [c.to_json() for c in self.constraints]
        return payload

    @staticmethod
    def from_payload(obj: Mapping[str, Any]) -> "ConfigMsg":
        _require_keys(
            obj,
            {"solver", "settings", "space", "direction", "max_evals", "seed"},
            {"constraints"},
            "ConfigMsg",
        )
        raw = obj.get("constraints", [])
        if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
            raise SchemaViolation("constraints must be an array")
        try:
            constraints = tuple(Constraint.from_json(c) for c in raw)
        except (TypeError, ValueError) as exc:
            raise SchemaViolation(f"constraints: {exc}") from None
        space_obj = obj["space"]
        if not isinstance(space_obj, Mapping):
            raise SchemaViolation("space must be an object")
        return ConfigMsg(
            solver=obj["solver"],
            settings=obj["settings"],
            space={k: tuple(v) if isinstance(v, Sequence) else v for k, v in space_obj.items()},
            direction=obj["direction"],
            max_evals=obj["max_evals"],
            seed=obj["seed"],
            constraints=constraints,
        )


@dataclass(frozen=True)
class EvalRequest:
    request_id: int
    candidates: tuple[dict[str, float], ...]

    def __post_init__(self) -> None:
        if _check_int(self.request_id, "request_id") < 0:
            raise SchemaViolation("request_id must be >= 0")
        if not isinstance(self.candidates, Sequence) or isinstance(self.candidates, (str, bytes)):
            raise SchemaViolation("candidates must be an array")
        if not self.candidates:
            raise SchemaViolation("candidates must be nonempty")
        checked = tuple(
            _check_params(c, f"candidates[{i}]") for i, c in enumerate(self.candidates)
        )
        object.__setattr__(self, "candidates", checked)

    def to_payload(self) -> dict[str, Any]:
        return {"request_id": self.request_id, "candidates": list(self.candidates)}

    @staticmethod
    def from_payload(obj: Mapping[str, Any]) -> "EvalRequest":
        _require_keys(obj, {"request_id", "candidates"}, set(), "EvalRequest")
        candidates = obj["candidates"]
        if not isinstance(candidates, Sequence) or isinstance(candidates, (str, bytes)):
            raise SchemaViolation("candidates must be an array")
        return EvalRequest(obj["request_id"], tuple(candidates))


@dataclass(frozen=True)
class EvalReply:
    request_id: int
    values: tuple[float | EvalFailure, ...]

    def __post_init__(self) -> None:
        if _check_int(self.request_id, "request_id") < 0:
            raise SchemaViolation("request_id must be >= 0")
        if not isinstance(self.values, Sequence) or isinstance(self.values, (str, bytes)):
            raise SchemaViolation("values must be an array")
        if not self.values:
            raise SchemaViolation("values must be nonempty")
        checked: list[float | EvalFailure] = []
        for i, v in enumerate(self.values):
            if isinstance(v, EvalFailure):
                checked.append(v)
            else:
                checked.append(_check_number(v, f"values[{i}]"))
        object.__setattr__(self, "values", tuple(checked))

    def to_payload(self) -> dict[str, Any]:
        return {
            "request_id": self.request_id,
            "values": [
                {"error": v.error} if isinstance(v, EvalFailure) else v
                for v in self.values
            ],
        }

    @staticmethod
    def from_payload(obj: Mapping[str, Any]) -> "EvalReply":
        _require_keys(obj, {"request_id", "values"}, set(), "EvalReply")
        raw = obj["values"]
        if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
            raise SchemaViolation("values must be an array")
        values: list[float | EvalFailure] = []
        for i, v in enumerate(raw):
            if isinstance(v, Mapping):
                extra = set(v) - {"error"}
                if extra or "error" not in v:
                    raise SchemaViolation(
                        f"values[{i}] object must have exactly the key 'error'"
                    )
                values.append(EvalFailure(_check_str(v["error"], f"values[{i}].error")))
            else:
                values.append(v)
        return EvalReply(obj["request_id"], tuple(values))


@dataclass(frozen=True)
class ResultMsg:
    solution: dict[str, float]
    optimum: float
    num_evals: int
    time: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "solution", _check_params(self.solution, "solution"))
        object.__setattr__(self, "optimum", _check_number(self.optimum, "optimum"))
        if _check_int(self.num_evals, "stats.num_evals") < 0:
            raise SchemaViolation("stats.num_evals must be >= 0")
        object.__setattr__(self, "time", _check_number(self.time, "stats.time"))

    def to_payload(self) -> dict[str, Any]:
        return {
            "solution": self.solution,
            "optimum": self.optimum,
            "stats": {"num_evals": self.num_evals, "time": self.time},
        }

    @staticmethod
    def from_payload(obj: Mapping[str, Any]) -> "ResultMsg":
        _require_keys(obj, {"solution", "optimum", "stats"}, set(), "ResultMsg")
        stats = obj["stats"]
        if not isinstance(stats, Mapping):
            raise SchemaViolation("stats must be an object")
        _require_keys(stats, {"num_evals", "time"}, set(), "stats")
        return ResultMsg(obj["solution"], obj["optimum"], stats["num_evals"], stats["time"])


@dataclass(frozen=True)
class ErrorMsg:
    error: str

    def __post_init__(self) -> None:
        _check_str(self.error, "error")

    def to_payload(self) -> dict[str, Any]:
        return {"error": self.error}

    @staticmethod
    def from_payload(obj: Mapping[str, Any]) -> "ErrorMsg":
        _require_keys(obj, {"error"}, set(), "ErrorMsg")
        return ErrorMsg(obj["error"])


ProtocolMessage = ConfigMsg | EvalRequest | EvalReply | ResultMsg | ErrorMsg


def encode(msg: ProtocolMessage) -> bytes:
    """Canonical newline-terminated UTF-8 JSON line."""
    text = json.dumps(
        msg.to_payload(), sort_keys=True, separators=(",", ":"), allow_nan=False
    )
    return text.encode("utf-8") + b"\n"


def _reject_constant(token: str) -> None:
    raise MalformedJson(f"non-finite JSON constant {token!r} not allowed")


def decode(line: bytes | str) -> ProtocolMessage:
    """Parse and schema-check one line; the inverse of :func:`encode`."""
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"invalid UTF-8: {exc}") from None
    try:
        obj = json.loads(line, parse_constant=_reject_constant)
    except MalformedJson:
        raise
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid JSON line: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise SchemaViolation("message must be a JSON object")
    keys = set(obj)
    if "solver" in keys:
        return ConfigMsg.from_payload(obj)
    if "candidates" in keys:
        return EvalRequest.from_payload(obj)
    if "values" in keys:
        return EvalReply.from_payload(obj)
    if "solution" in keys:
        return ResultMsg.from_payload(obj)
    if keys == {"error"}:
        return ErrorMsg.from_payload(obj)
    raise SchemaViolation(
        f"cannot discriminate message with keys {sorted(keys)}"
    )
