"""Top-level tuning facade: optimize, maximize, minimize.

Objectives take a :class:`ParamVector` and return a real score. The
facade accepts either a prebuilt :class:`SearchSpace` or keyword bounds
(``maximize(f, num_evals=100, C=(0, 10), gamma=(0, 1))``). The solver
defaults to particle swarm when unspecified.
"""

from __future__ import annotations

import time
from typing import Callable, Mapping

import numpy as np

from .batch import BatchRequest, BatchResult, evaluate_batch
from .core import Budget, EvalLoop, OptimizationResult
from .errors import SolverUnknown
from .solvers import SOLVERS, SolverConfig, select_default_solver
from .space import ParamVector, SearchSpace, make_space

Objective = Callable[[ParamVector], float]
BatchEvaluator = Callable[[BatchRequest], BatchResult]


def _as_config(solver: SolverConfig | str | None) -> SolverConfig:
    if solver is None:
        return select_default_solver()
    if isinstance(solver, SolverConfig):
        return solver
    if isinstance(solver, str):
        return SolverConfig(solver)
    raise SolverUnknown(f"solver must be a name or SolverConfig, got {type(solver).__name__}")


def run_optimization(
    config: SolverConfig,
    space: SearchSpace,
    direction: str,
    num_evals: int,
    seed: int = 0,
    evaluator: BatchEvaluator | None = None,
    objective: Objective | None = None,
    parallelism: int = 1,
    dedupe: bool = False,
) -> OptimizationResult:
    """Drive one solver against a batch evaluator; the engine's inner loop.

    Exactly one of ``evaluator`` (a batch callable, e.g. a wire-backed
    one) or ``objective`` (a plain per-point callable) must be given.
    """
    if (evaluator is None) == (objective is None):
        raise TypeError("pass exactly one of evaluator or objective")
    if evaluator is None:
        f = objective

        def evaluator(request: BatchRequest) -> BatchResult:
            return evaluate_batch(f, request, parallelism)

    loop = EvalLoop(space, direction, Budget(int(num_evals)), evaluator, dedupe)
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
    started = time.perf_counter()
    stop_reason = SOLVERS[config.name].run(loop, config.resolved_settings(), rng)
    return loop.result(config.name, stop_reason, time.perf_counter() - started)


def optimize(
    solver: SolverConfig | str | None,
    f: Objective,
    space: SearchSpace,
    direction: str,
    num_evals: int,
    seed: int = 0,
    parallelism: int = 1,
    dedupe: bool = False,
) -> OptimizationResult:
    """Run one seeded, budgeted search in the given direction."""
    return run_optimization(
        _as_config(solver),
        space,
        direction,
        num_evals,
        seed=seed,
        objective=f,
        parallelism=parallelism,
        dedupe=dedupe,
    )


def _resolve_space(
    space: SearchSpace | Mapping[str, tuple[float, float]] | None,
    bounds: Mapping[str, tuple[float, float]],
) -> SearchSpace:
    if space is not None and bounds:
        raise TypeError("pass either a space or keyword bounds, not both")
    if space is None:
        return make_space(dict(bounds))
    if isinstance(space, SearchSpace):
        return space
    return make_space(dict(space))


def maximize(
    f: Objective,
    space: SearchSpace | Mapping[str, tuple[float, float]] | None = None,
    num_evals: int = 100,
    solver: SolverConfig | str | None = None,
    seed: int = 0,
    parallelism: int = 1,
    dedupe: bool = False,
    **bounds: tuple[float, float],
) -> OptimizationResult:
    """Search for the highest score of ``f`` over the box."""
    return optimize(
        solver,
        f,
        _resolve_space(space, bounds),
        "maximize",
        num_evals,
        seed=seed,
        parallelism=parallelism,
        dedupe=dedupe,
    )


def minimize(
    f: Objective,
    space: SearchSpace | Mapping[str, tuple[float, float]] | None = None,
    num_evals: int = 100,
    solver: SolverConfig | str | None = None,
    seed: int = 0,
    parallelism: int = 1,
    dedupe: bool = False,
    **bounds: tuple[float, float],
) -> OptimizationResult:
    """Search for the lowest score of ``f`` over the box."""
    return optimize(
        solver,
        f,
        _resolve_space(space, bounds),
        "minimize",
        num_evals,
        seed=seed,
        parallelism=parallelism,
        dedupe=dedupe,
    )
