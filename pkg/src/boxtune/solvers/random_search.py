"""Undirected random search: i.i.d. uniform samples over the box."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..core import EvalLoop
from ..space import ParamVector, SearchSpace

ALLOWED_SETTINGS: tuple[str, ...] = ()
DEFAULTS: dict[str, object] = {}


def validate_settings(settings: Mapping[str, object]) -> None:
    return None


def _sample(space: SearchSpace, count: int, rng: np.random.Generator) -> list[ParamVector]:
    lowers = np.asarray(space.lowers)
    widths = space.widths()
    u = rng.random((count, space.dim))
    points = lowers + u * widths
    return [space.vector(row) for row in points]


def random_generate(space: SearchSpace, count: int, seed: int) -> list[ParamVector]:
    """Deterministic uniform sample of ``count`` points under ``seed``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
    return _sample(space, count, rng)


def run(loop: EvalLoop, settings: Mapping[str, object], rng: np.random.Generator) -> str:
    while not loop.exhausted:
        before = loop.num_evals
        loop.ask(_sample(loop.space, loop.remaining, rng))
        if loop.num_evals == before:
            # dedupe served every sample from the log (e.g. fully degenerate
            # space); nothing fresh left to try
            return "converged"
    return "budget"
