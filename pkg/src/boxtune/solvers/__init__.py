"""Solver registry: grid, random, nelder-mead, pso (the default), cmaes.

Each solver module exposes ``ALLOWED_SETTINGS``, ``DEFAULTS``,
``validate_settings``, and ``run(loop, settings, rng)``; this package
wires them into a name-keyed registry and validates configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..errors import SolverUnknown, UnknownSetting
from ..space import SearchSpace
from . import cmaes, grid, nelder_mead, pso, random_search
from .cmaes import CmaesState
from .grid import grid_generate
from .nelder_mead import SimplexState, initial_simplex, nelder_mead_step
from .pso import SwarmState
from .random_search import random_generate

RunFn = Callable[..., str]


@dataclass(frozen=True)
class SolverSpec:
    name: str
    run: RunFn
    validate_settings: Callable[[Mapping[str, Any]], None]
    defaults: Mapping[str, Any]
    allowed_settings: tuple[str, ...]


SOLVERS: dict[str, SolverSpec] = {
    "grid": SolverSpec(
        "grid", grid.run, grid.validate_settings, grid.DEFAULTS, grid.ALLOWED_SETTINGS
    ),
    "random": SolverSpec(
        "random",
        random_search.run,
        random_search.validate_settings,
        random_search.DEFAULTS,
        random_search.ALLOWED_SETTINGS,
    ),
    "nelder-mead": SolverSpec(
        "nelder-mead",
        nelder_mead.run,
        nelder_mead.validate_settings,
        nelder_mead.DEFAULTS,
        nelder_mead.ALLOWED_SETTINGS,
    ),
    "pso": SolverSpec(
        "pso", pso.run, pso.validate_settings, pso.DEFAULTS, pso.ALLOWED_SETTINGS
    ),
    "cmaes": SolverSpec(
        "cmaes",
        cmaes.run,
        cmaes.validate_settings,
        cmaes.DEFAULTS,
        cmaes.ALLOWED_SETTINGS,
    ),
}


@dataclass(frozen=True)
class SolverConfig:
    """A solver name plus settings, checked against the registry."""

    name: str
    settings: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in SOLVERS:
            raise SolverUnknown(
                f"unknown solver {self.name!r}; known: {sorted(SOLVERS)}"
            )
        spec = SOLVERS[self.name]
        unknown = set(self.settings) - set(spec.allowed_settings)
        if unknown:
            raise UnknownSetting(
                f"unknown settings for {self.name}: {sorted(unknown)}; "
                f"allowed: {list(spec.allowed_settings)}"
            )
        spec.validate_settings(self.settings)

    def resolved_settings(self) -> dict[str, Any]:
        merged = dict(SOLVERS[self.name].defaults)
        merged.update(self.settings)
        return merged


def select_default_solver() -> SolverConfig:
    """The engine's default: particle swarm with its documented settings."""
    return SolverConfig("pso", dict(pso.DEFAULTS))


def pso_run(
    space: SearchSpace,
    f: Callable[..., float],
    direction: str,
    budget: int,
    settings: Mapping[str, Any] | None = None,
    seed: int = 0,
):
    from ..api import optimize

    config = SolverConfig("pso", dict(settings or {}))
    return optimize(config, f, space, direction, budget, seed)


def cmaes_run(
    space: SearchSpace,
    f: Callable[..., float],
    direction: str,
    budget: int,
    settings: Mapping[str, Any] | None = None,
    seed: int = 0,
):
    from ..api import optimize

    config = SolverConfig("cmaes", dict(settings or {}))
    return optimize(config, f, space, direction, budget, seed)


__all__ = [
    "CmaesState",
    "SimplexState",
    "SolverConfig",
    "SolverSpec",
    "SOLVERS",
    "SwarmState",
    "cmaes_run",
    "grid_generate",
    "initial_simplex",
    "nelder_mead_step",
    "pso_run",
    "random_generate",
    "select_default_solver",
]
