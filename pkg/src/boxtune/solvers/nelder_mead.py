"""Nelder-Mead simplex search with standard coefficients.

Reflection/expansion/contraction/shrink with (alpha, gamma, rho, sigma) =
(1, 2, 0.5, 0.5). The initial simplex is the start point (box center by
default) plus one vertex per non-degenerate axis, offset by 5% of that
axis's width; degenerate axes are frozen. Candidates are clamped into the
box before evaluation. The solver stops when the simplex diameter (max
infinity-norm distance from the best vertex) drops to ``tol``.

A simplex that collapses across a discontinuity - diameter at tolerance
while the score spread across vertices stays large - raises
:class:`DegenerateSimplex` instead of claiming convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..core import EvalLoop
from ..errors import DegenerateSimplex
from ..space import ParamVector, SearchSpace

ALPHA = 1.0  # reflection
GAMMA = 2.0  # expansion
RHO = 0.5  # contraction
SIGMA = 0.5  # shrink

# score spread allowed at a collapsed simplex before calling it degenerate
CLIFF_RATIO = 1e6

ALLOWED_SETTINGS = ("tol", "start")
DEFAULTS: dict[str, object] = {"tol": 1e-8, "start": None}


def validate_settings(settings: Mapping[str, object]) -> None:
    tol = settings.get("tol", DEFAULTS["tol"])
    if not isinstance(tol, (int, float)) or isinstance(tol, bool):
        raise ValueError("tol must be a positive number")
    if not math.isfinite(tol) or tol <= 0:
        raise ValueError("tol must be a positive finite number")
    start = settings.get("start")
    if start is not None and not isinstance(start, Mapping):
        raise ValueError("start must be a mapping of name -> value")


@dataclass(frozen=True)
class SimplexState:
    """Simplex vertices with their raw scores, sorted best-first."""

    space: SearchSpace
    vertices: tuple[ParamVector, ...]
    scores: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.scores):
            raise ValueError("one score per vertex required")
        if len(self.vertices) < 2:
            raise ValueError("a simplex needs at least 2 vertices")

    def diameter(self) -> float:
        arrays = [self.space.to_array(v) for v in self.vertices]
        best = arrays[0]
        return max(float(np.max(np.abs(a - best))) for a in arrays[1:])


_EvalFn = Callable[[np.ndarray], float]


class _OutOfBudget(Exception):
    pass


def _initial_arrays(space: SearchSpace, start: np.ndarray) -> list[np.ndarray]:
    verts = [start.copy()]
    for i in range(space.dim):
        lo, hi = space.lowers[i], space.uppers[i]
        if lo == hi:
            continue
        off = 0.05 * (hi - lo)
        v = start.copy()
        v[i] = v[i] + off if v[i] + off <= hi else v[i] - off
        verts.append(v)
    return verts


def _sorted_simplex(
    verts: list[np.ndarray], losses: list[float]
) -> tuple[list[np.ndarray], list[float]]:
    order = sorted(range(len(verts)), key=lambda i: (losses[i], i))
    return [verts[i] for i in order], [losses[i] for i in order]


def _diameter(verts: list[np.ndarray]) -> float:
    best = verts[0]
    return max(float(np.max(np.abs(v - best))) for v in verts[1:])


def _iterate(
    space: SearchSpace, verts: list[np.ndarray], losses: list[float], evalf: _EvalFn
) -> tuple[list[np.ndarray], list[float]]:
    """One reflection/expansion/contraction/shrink pass on a sorted simplex."""
    clamp = space.clamp_array
    centroid = np.mean(verts[:-1], axis=0)
    worst = verts[-1]
    f_best, f_second, f_worst = losses[0], losses[-2], losses[-1]

    xr = clamp(centroid + ALPHA * (centroid - worst))
    fr = evalf(xr)
    if fr < f_best:
        xe = clamp(centroid + GAMMA * (centroid - worst))
        fe = evalf(xe)
        verts[-1], losses[-1] = (xe, fe) if fe < fr else (xr, fr)
    elif fr < f_second:
        verts[-1], losses[-1] = xr, fr
    else:
        if fr < f_worst:
            # outside contraction, toward the reflected point
            xc = clamp(centroid + RHO * (xr - centroid))
            fc = evalf(xc)
            accept = fc <= fr
        else:
            # inside contraction, toward the worst vertex
            xc = clamp(centroid + RHO * (worst - centroid))
            fc = evalf(xc)
            accept = fc < f_worst
        if accept:
            verts[-1], losses[-1] = xc, fc
        else:
            best = verts[0]
            for i in range(1, len(verts)):
                verts[i] = clamp(best + SIGMA * (verts[i] - best))
                losses[i] = evalf(verts[i])
    return _sorted_simplex(verts, losses)


def _check_collapse(
    verts: list[np.ndarray], losses: list[float], tol: float
) -> bool:
    """True when converged; raises on a degenerate (cliff) collapse."""
    if _diameter(verts) > tol:
        return False
    finite = [l for l in losses if math.isfinite(l)]
    spread = (max(finite) - min(finite)) if finite else math.inf
    if spread > CLIFF_RATIO * tol:
        raise DegenerateSimplex(
            f"simplex diameter <= {tol} but score spread {spread:g} "
            "remains; no convergence"
        )
    return True


def initial_simplex(
    space: SearchSpace,
    f: Callable[[ParamVector], float],
    direction: str,
    start: Mapping[str, float] | None = None,
) -> SimplexState:
    """Evaluate the standard start simplex (center plus 5%-width offsets)."""
    start_vec = space.center() if start is None else space.clamp(space.from_dict(start))
    arrays = _initial_arrays(space, space.to_array(start_vec))
    vertices = [space.vector(a) for a in arrays]
    scores = [float(f(v)) for v in vertices]
    sign = 1.0 if direction == "minimize" else -1.0
    order = sorted(range(len(vertices)), key=lambda i: (sign * scores[i], i))
    return SimplexState(
        space,
        tuple(vertices[i] for i in order),
        tuple(scores[i] for i in order),
    )


def nelder_mead_step(
    state: SimplexState,
    f: Callable[[ParamVector], float],
    direction: str,
    tol: float = 1e-8,
) -> SimplexState:
    """Apply one simplex iteration; returns the state unchanged once the
    diameter criterion is met."""
    sign = 1.0 if direction == "minimize" else -1.0
    verts = [state.space.to_array(v) for v in state.vertices]
    losses = [sign * s for s in state.scores]
    verts, losses = _sorted_simplex(verts, losses)
    if _check_collapse(verts, losses, tol):
        return state
    verts, losses = _iterate(state.space, verts, losses, lambda x: sign * float(f(state.space.vector(x))))
    return SimplexState(
        state.space,
        tuple(state.space.vector(v) for v in verts),
        tuple(sign * l for l in losses),
    )


def run(loop: EvalLoop, settings: Mapping[str, object], rng: np.random.Generator) -> str:
    space = loop.space
    tol = float(settings["tol"])
    start_setting = settings.get("start")

    if not any(lo < hi for lo, hi in zip(space.lowers, space.uppers)):
        loop.ask([space.center()])
        return "converged"

    start_vec = (
        space.center()
        if start_setting is None
        else space.clamp(space.from_dict(dict(start_setting)))
    )
    arrays = _initial_arrays(space, space.to_array(start_vec))
    answers = loop.ask([space.vector(a) for a in arrays])
    if len(answers) < len(arrays):
        return "budget"

    def ask1(x: np.ndarray) -> float:
        res = loop.ask([space.vector(x)])
        if not res:
            raise _OutOfBudget
        return math.inf if res[0] is None else res[0]

    losses = [math.inf if a is None else a for a in answers]
    verts, losses = _sorted_simplex(arrays, losses)
    while True:
        if _check_collapse(verts, losses, tol):
            return "converged"
        if loop.exhausted:
            return "budget"
        try:
            verts, losses = _iterate(space, verts, losses, ask1)
        except _OutOfBudget:
            return "budget"
