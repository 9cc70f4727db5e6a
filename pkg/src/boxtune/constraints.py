"""Domain constraints that short-circuit objective evaluation.

A violating point returns the caller-supplied default value without
invoking the inner objective; the evaluation still consumes budget like
any other. There is no implicit penalty value: callers must state one
appropriate for their direction (for example -1e18 when maximizing).

``range`` constraints are closed intervals; the ``*_open`` and
``*_closed`` kinds give strict and non-strict single-sided bounds.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .batch import is_concurrency_safe, mark_concurrency_safe
from .errors import UnknownDimension
from .space import ParamVector

KINDS = ("lower_open", "lower_closed", "upper_open", "upper_closed", "range")


@dataclass(frozen=True)
class Constraint:
    """One bound on one dimension."""

    kind: str
    dim: str
    bounds: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}; known: {list(KINDS)}")
        if not isinstance(self.dim, str) or not self.dim:
            raise ValueError("constraint dimension must be a nonempty string")
        bounds = tuple(float(b) for b in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        expected = 2 if self.kind == "range" else 1
        if len(bounds) != expected:
            raise ValueError(f"{self.kind} takes {expected} bound(s), got {len(bounds)}")
        if any(math.isnan(b) for b in bounds):
            raise ValueError("constraint bounds must not be NaN")
        if self.kind == "range" and not bounds[0] < bounds[1]:
            raise ValueError(f"range requires lower < upper, got {bounds}")

    def satisfied(self, value: float) -> bool:
        b = self.bounds
        if self.kind == "lower_open":
            return value > b[0]
        if self.kind == "lower_closed":
            return value >= b[0]
        if self.kind == "upper_open":
            return value < b[0]
        if self.kind == "upper_closed":
            return value <= b[0]
        return b[0] <= value <= b[1]

    def to_json(self) -> dict[str, object]:
        return {"kind": self.kind, "dim": self.dim, "bounds": list(self.bounds)}

    @staticmethod
    def from_json(obj: Mapping[str, object]) -> "Constraint":
        extra = set(obj) - {"kind", "dim", "bounds"}
        if extra:
            raise ValueError(f"unknown constraint keys: {sorted(extra)}")
        try:
            kind, dim, bounds = obj["kind"], obj["dim"], obj["bounds"]
        except KeyError as exc:
            raise ValueError(f"constraint missing key {exc.args[0]!r}") from None
        if not isinstance(bounds, Sequence) or isinstance(bounds, (str, bytes)):
            raise ValueError("constraint bounds must be an array")
        return Constraint(str(kind), str(dim), tuple(float(b) for b in bounds))


def check(constraints: Iterable[Constraint], p: ParamVector) -> list[Constraint]:
    """Violated constraints in declaration order; empty iff all hold."""
    violated = []
    for c in constraints:
        try:
            value = p[c.dim]
        except KeyError:
            raise UnknownDimension(
                f"constraint on {c.dim!r} but vector has {list(p.names)}"
            ) from None
        if not c.satisfied(value):
            violated.append(c)
    return violated


class ConstrainedObjective:
    """Objective wrapper that never calls through on a violating point."""

    def __init__(
        self,
        inner: Callable[[ParamVector], float],
        constraints: Iterable[Constraint],
        default_value: float,
    ) -> None:
        self.inner = inner
        self.constraints = tuple(constraints)
        self.default_value = float(default_value)
        self._lock = threading.Lock()
        self._inner_calls = 0
        if is_concurrency_safe(inner):
            mark_concurrency_safe(self)

    @property
    def inner_calls(self) -> int:
        with self._lock:
            return self._inner_calls

    def __call__(self, p: ParamVector) -> float:
        if check(self.constraints, p):
            return self.default_value
        with self._lock:
            self._inner_calls += 1
        return self.inner(p)


def wrap_constraints(
    f: Callable[[ParamVector], float],
    constraints: Iterable[Constraint],
    default_value: float,
) -> ConstrainedObjective:
    return ConstrainedObjective(f, constraints, default_value)
