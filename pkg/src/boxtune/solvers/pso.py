"""Particle swarm optimization; the engine's default solver.

Constriction-style defaults (w=0.729, c1=c2=1.49445). Velocities are
clamped to half the box width per axis and positions are clamped to the
box after every move, so all evaluated points stay feasible. Each
generation is one batch of ``num_particles`` evaluations; the number of
full generations is ``floor(budget / num_particles)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..core import EvalLoop
from ..space import ParamVector, SearchSpace

ALLOWED_SETTINGS = ("num_particles", "w", "c1", "c2")

# Consecutive all-cached generations tolerated before declaring convergence.
# Cached answers spend no budget, so a swarm pinned on logged points (for
# example clamped to a box face with only decaying inertia left) would loop
# forever without this cutoff. Inertia shrinks by w per generation but
# underflows to a denormal rather than exact zero, so a velocity test is
# not a usable stop signal.
STALL_LIMIT = 50
DEFAULTS: dict[str, object] = {
    "num_particles": 20,
    "w": 0.729,
    "c1": 1.49445,
    "c2": 1.49445,
}


def validate_settings(settings: Mapping[str, object]) -> None:
    n = settings.get("num_particles", DEFAULTS["num_particles"])
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError("num_particles must be an integer >= 2")
    for key in ("w", "c1", "c2"):
        v = settings.get(key, DEFAULTS[key])
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise ValueError(f"{key} must be a finite number")


@dataclass
class SwarmState:
    """Swarm positions and bests, tracked in loss (minimize) space.

    ``best_losses`` starts at +inf; a particle whose evaluations all fail
    simply never improves it. ``global_best_loss`` only moves on strict
    improvement, so the first particle to reach a value keeps the credit.
    """

    positions: np.ndarray
    velocities: np.ndarray
    best_positions: np.ndarray
    best_losses: np.ndarray
    global_best_position: np.ndarray
    global_best_loss: float
    generation: int

    def candidates(self, space: SearchSpace) -> list[ParamVector]:
        return [space.vector(row) for row in self.positions]


def make_swarm(space: SearchSpace, num_particles: int, rng: np.random.Generator) -> SwarmState:
    lowers = np.asarray(space.lowers)
    positions = lowers + rng.random((num_particles, space.dim)) * space.widths()
    return SwarmState(
        positions=positions,
        velocities=np.zeros_like(positions),
        best_positions=positions.copy(),
        best_losses=np.full(num_particles, np.inf),
        global_best_position=positions[0].copy(),
        global_best_loss=math.inf,
        generation=0,
    )


def move_swarm(
    state: SwarmState,
    space: SearchSpace,
    w: float,
    c1: float,
    c2: float,
    rng: np.random.Generator,
) -> None:
    """v <- w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x), then clamp both."""
    shape = state.positions.shape
    r1 = rng.random(shape)
    r2 = rng.random(shape)
    state.velocities = (
        w * state.velocities
        + c1 * r1 * (state.best_positions - state.positions)
        + c2 * r2 * (state.global_best_position - state.positions)
    )
    vmax = 0.5 * space.widths()
    state.velocities = np.clip(state.velocities, -vmax, vmax)
    state.positions = space.clamp_array(state.positions + state.velocities)
    state.generation += 1


def absorb_losses(state: SwarmState, losses: list[float | None]) -> None:
    """Update per-particle and global bests; strict improvement only."""
    for i, loss in enumerate(losses):
        if loss is not None and loss < state.best_losses[i]:
            state.best_losses[i] = loss
            state.best_positions[i] = state.positions[i]
    best_i = int(np.argmin(state.best_losses))
    if state.best_losses[best_i] < state.global_best_loss:
        state.global_best_loss = float(state.best_losses[best_i])
        state.global_best_position = state.best_positions[best_i].copy()


def run(loop: EvalLoop, settings: Mapping[str, object], rng: np.random.Generator) -> str:
    space = loop.space
    n = int(settings["num_particles"])
    w = float(settings["w"])
    c1 = float(settings["c1"])
    c2 = float(settings["c2"])

    state = make_swarm(space, n, rng)
    absorb_losses(state, loop.ask(state.candidates(space)))
    stalled = 0
    while not loop.exhausted:
        before = loop.num_evals
        move_swarm(state, space, w, c1, c2, rng)
        absorb_losses(state, loop.ask(state.candidates(space)))
        stalled = stalled + 1 if loop.num_evals == before else 0
        if stalled >= STALL_LIMIT:
            return "converged"
    return "budget"
