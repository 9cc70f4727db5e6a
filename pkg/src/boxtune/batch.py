"""Batched candidate evaluation.

Solvers hand whole generations of candidates to this module so the
objective side can parallelize. Results come back in request order and
are identical to sequential evaluation regardless of parallelism; a
failure of one candidate never poisons the rest of the batch.

Objectives must opt in to concurrent calls via
:func:`mark_concurrency_safe`; unmarked objectives are evaluated
sequentially even when ``parallelism > 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .space import ParamVector

Objective = Callable[[ParamVector], float]


@dataclass(frozen=True)
class EvalFailure:
    """Failure marker for a single evaluation."""

    error: str


Outcome = float | EvalFailure


@dataclass(frozen=True)
class BatchRequest:
    candidates: tuple[ParamVector, ...]
    batch_id: int

    def __post_init__(self) -> None:
        if not self.candidates:
            raise ValueError("batch must contain at least one candidate")


@dataclass(frozen=True)
class BatchResult:
    outcomes: tuple[Outcome, ...]


def mark_concurrency_safe(f: Objective) -> Objective:
    """Declare an objective safe for concurrent calls (decorator-friendly)."""
    f.concurrency_safe = True  # type: ignore[attr-defined]
    return f


def is_concurrency_safe(f: object) -> bool:
    return bool(getattr(f, "concurrency_safe", False))


def _eval_one(f: Objective, p: ParamVector) -> Outcome:
    try:
        raw = f(p)
    except Exception as exc:  # isolation: per-element failure value
        return EvalFailure(f"{type(exc).__name__}: {exc}")
    try:
        value = float(raw)
    except (TypeError, ValueError):
        return EvalFailure(f"objective returned non-numeric value {raw!r}")
    if not math.isfinite(value):
        return EvalFailure(f"objective returned non-finite value {value!r}")
    return value


def evaluate_batch(
    f: Objective, request: BatchRequest, parallelism: int = 1
) -> BatchResult:
    """Evaluate all candidates; outcomes[i] corresponds to candidates[i]."""
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    workers = parallelism if is_concurrency_safe(f) else 1
    workers = min(workers, len(request.candidates))
    if workers <= 1:
        outcomes = [_eval_one(f, p) for p in request.candidates]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda p: _eval_one(f, p), request.candidates))
    return BatchResult(tuple(outcomes))
