"""Exhaustive search over a Cartesian grid of per-dimension linspaces."""

from __future__ import annotations

import itertools
from typing import Mapping

import numpy as np

from ..core import EvalLoop
from ..errors import GridTooLarge
from ..space import ParamVector, SearchSpace

ALLOWED_SETTINGS = ("points_per_dim",)
DEFAULTS: dict[str, object] = {"points_per_dim": None}


def validate_settings(settings: Mapping[str, object]) -> None:
    ppd = settings.get("points_per_dim")
    if ppd is None:
        return
    if isinstance(ppd, bool):
        raise ValueError("points_per_dim must be a positive integer")
    if isinstance(ppd, int):
        if ppd < 1:
            raise ValueError("points_per_dim must be >= 1")
        return
    if isinstance(ppd, Mapping):
        for name, k in ppd.items():
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ValueError(f"points_per_dim[{name!r}] must be a positive integer")
        return
    raise ValueError("points_per_dim must be an int or a name -> int mapping")


def _axis_points(lo: float, hi: float, k: int) -> list[float]:
    # degenerate axes are constants; one point means the symmetric midpoint
    if lo == hi or k == 1:
        return [(lo + hi) / 2.0]
    return [float(v) for v in np.linspace(lo, hi, k)]


def _auto_points_per_dim(space: SearchSpace, budget: int) -> dict[str, int]:
    """Largest uniform k with k**d <= budget over the non-degenerate axes."""
    free = [n for n, lo, hi in zip(space.names, space.lowers, space.uppers) if lo < hi]
    counts = {name: 1 for name in space.names}
    d = len(free)
    if d == 0:
        return counts
    k = max(1, int(round(budget ** (1.0 / d))))
    while k**d > budget:
        k -= 1
    while (k + 1) ** d <= budget:
        k += 1
    for name in free:
        counts[name] = max(1, k)
    return counts


def _resolve_counts(
    space: SearchSpace, ppd: int | Mapping[str, int] | None, budget: int | None
) -> dict[str, int]:
    if ppd is None:
        if budget is None:
            raise ValueError("points_per_dim required when no budget is given")
        return _auto_points_per_dim(space, budget)
    if isinstance(ppd, int):
        counts = {name: ppd for name in space.names}
    else:
        unknown = set(ppd) - set(space.names)
        if unknown:
            raise ValueError(f"points_per_dim names unknown dimensions: {sorted(unknown)}")
        counts = {name: int(ppd.get(name, 1)) for name in space.names}
    # degenerate axes collapse to their single value
    for name, lo, hi in zip(space.names, space.lowers, space.uppers):
        if lo == hi:
            counts[name] = 1
    return counts


def grid_generate(
    space: SearchSpace,
    points_per_dim: int | Mapping[str, int],
    budget: int | None = None,
) -> list[ParamVector]:
    """Cartesian product of endpoint-inclusive linspaces, lexicographic order.

    When ``budget`` is given the total grid size is checked against it and
    :class:`GridTooLarge` is raised on overflow.
    """
    counts = _resolve_counts(space, points_per_dim, None)
    total = 1
    for k in counts.values():
        total *= k
    if budget is not None and total > budget:
        raise GridTooLarge(f"grid of {total} points exceeds budget {budget}")
    axes = [
        _axis_points(lo, hi, counts[name])
        for name, lo, hi in zip(space.names, space.lowers, space.uppers)
    ]
    return [space.vector(combo) for combo in itertools.product(*axes)]


def run(loop: EvalLoop, settings: Mapping[str, object], rng: np.random.Generator) -> str:
    ppd = settings.get("points_per_dim")
    if ppd is None:
        counts: Mapping[str, int] | int = _auto_points_per_dim(loop.space, loop.max_evals)
        points = grid_generate(loop.space, counts)
    else:
        points = grid_generate(loop.space, ppd, budget=loop.max_evals)
    answered = loop.ask(points)
    return "grid_exhausted" if len(answered) == len(points) else "budget"
