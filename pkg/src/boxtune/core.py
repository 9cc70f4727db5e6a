"""Budgeted evaluation loop shared by every solver.

The :class:`EvalLoop` is the only path through which solvers may evaluate
candidates. It enforces the evaluation budget (truncating oversized
batches rather than rejecting them), checks feasibility, keeps the
:class:`CallLog`, and tracks the best successful evaluation with
earliest-wins tie-breaking.

Solvers see *losses*: scores normalized so that smaller is always better.
The call log and the final :class:`OptimizationResult` carry raw scores
as returned by the objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .batch import BatchRequest, BatchResult, EvalFailure, Outcome
from .errors import BudgetExhaustedWithNoSuccess
from .space import ParamVector, SearchSpace, TrialRecord

DIRECTIONS = ("maximize", "minimize")

BatchEvaluator = Callable[[BatchRequest], BatchResult]


@dataclass(frozen=True)
class Budget:
    """Hard cap on the number of objective evaluations in one run."""

    max_evals: int

    def __post_init__(self) -> None:
        if not isinstance(self.max_evals, int) or isinstance(self.max_evals, bool):
            raise ValueError("max_evals must be an integer")
        if self.max_evals < 1:
            raise ValueError("max_evals must be >= 1")


class CallLog:
    """Ordered trial records with an optional exact-match dedupe index."""

    def __init__(self, dedupe: bool = False) -> None:
        self.dedupe = dedupe
        self._records: list[TrialRecord] = []
        self._index: dict[ParamVector, TrialRecord] = {}

    def append(self, record: TrialRecord) -> None:
        self._records.append(record)
        if self.dedupe and record.params not in self._index:
            self._index[record.params] = record

    def lookup(self, params: ParamVector) -> TrialRecord | None:
        return self._index.get(params) if self.dedupe else None

    @property
    def records(self) -> tuple[TrialRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[TrialRecord]:
        return iter(self._records)


@dataclass(frozen=True)
class OptimizationResult:
    """Best point, its raw score, and the full audit trail of the run."""

    best_params: ParamVector
    best_score: float
    num_evals: int
    call_log: tuple[TrialRecord, ...]
    solver_name: str
    wall_time: float
    stop_reason: str


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


class EvalLoop:
    """Budget-enforcing evaluation driver handed to a solver's run function."""

    def __init__(
        self,
        space: SearchSpace,
        direction: str,
        budget: Budget,
        batch_evaluator: BatchEvaluator,
        dedupe: bool = False,
    ) -> None:
        _check_direction(direction)
        self.space = space
        self.direction = direction
        self.max_evals = budget.max_evals
        self._evaluate = batch_evaluator
        self.log = CallLog(dedupe=dedupe)
        self._best: TrialRecord | None = None
        self._next_batch_id = 0

    @property
    def num_evals(self) -> int:
        return len(self.log)

    @property
    def remaining(self) -> int:
        return self.max_evals - self.num_evals

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0

    @property
    def best(self) -> TrialRecord | None:
        return self._best

    def loss_of(self, score: float) -> float:
        """Normalize a raw score so smaller is better for every solver."""
        return score if self.direction == "minimize" else -score

    def ask(self, candidates: Sequence[ParamVector]) -> list[float | None]:
        """Evaluate candidates in order, spending budget only on fresh points.

        Returns one loss per answered candidate (``None`` for failures).
        The batch is truncated, not rejected, when it would overflow the
        remaining budget, so the returned list may be shorter than the
        request; dedupe hits are answered from the log for free.
        """
        losses: list[float | None] = []
        fresh: list[ParamVector] = []
        fresh_slots: list[int] = []
        for p in candidates:
            cached = self.log.lookup(p)
            if cached is not None:
                losses.append(None if cached.failed else self.loss_of(cached.score))
                continue
            if len(fresh) >= self.remaining:
                break
            if not self.space.contains(p):
                raise ValueError(
                    f"solver proposed an out-of-box point {p.as_dict()}"
                )
            fresh_slots.append(len(losses))
            losses.append(None)
            fresh.append(p)
        if fresh:
            request = BatchRequest(tuple(fresh), self._next_batch_id)
            self._next_batch_id += 1
            result = self._evaluate(request)
            if len(result.outcomes) != len(fresh):
                raise RuntimeError(
                    "batch evaluator returned "
                    f"{len(result.outcomes)} outcomes for {len(fresh)} candidates"
                )
            for slot, p, outcome in zip(fresh_slots, fresh, result.outcomes):
                record = self._record(p, outcome)
                losses[slot] = (
                    None if record.failed else self.loss_of(record.score)
                )
        return losses

    def _record(self, params: ParamVector, outcome: Outcome) -> TrialRecord:
        if isinstance(outcome, EvalFailure):
            record = TrialRecord(params, None, len(self.log), outcome.error)
        else:
            record = TrialRecord(params, float(outcome), len(self.log))
        self.log.append(record)
        if not record.failed:
            # strict improvement only: earliest eval wins ties
            if self._best is None or self.loss_of(record.score) < self.loss_of(
                self._best.score
            ):
                self._best = record
        return record

    def result(self, solver_name: str, stop_reason: str, wall_time: float) -> OptimizationResult:
        if self._best is None:
            raise BudgetExhaustedWithNoSuccess(
                f"all {self.num_evals} evaluations failed"
            )
        return OptimizationResult(
            best_params=self._best.params,
            best_score=self._best.score,
            num_evals=self.num_evals,
            call_log=self.log.records,
            solver_name=solver_name,
            wall_time=wall_time,
            stop_reason=stop_reason,
        )
