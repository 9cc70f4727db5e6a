"""Built-in benchmark objectives for hermetic runs: sphere, rosenbrock, branin.

Each carries its canonical box and known optimum so tests can assert
against analytic values. Dimension names are zero-padded (x00, x01, ...)
so lexicographic name order equals coordinate order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .space import ParamVector, SearchSpace, make_space

BUILTIN_NAMES = ("sphere", "rosenbrock", "branin")

# global minimum of the branin surface (same value at all three minimizers)
BRANIN_OPTIMUM = 0.39788735772973816


def sphere_value(x: np.ndarray) -> float:
    return float(np.sum(x * x))


def rosenbrock_value(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def branin_value(x: np.ndarray) -> float:
    a = 1.0
    b = 5.1 / (4.0 * math.pi**2)
    c = 5.0 / math.pi
    r = 6.0
    s = 10.0
    t = 1.0 / (8.0 * math.pi)
    x1, x2 = float(x[0]), float(x[1])
    return a * (x2 - b * x1**2 + c * x1 - r) ** 2 + s * (1 - t) * math.cos(x1) + s


def dim_names(d: int) -> list[str]:
    width = max(2, len(str(d - 1)))
    return [f"x{i:0{width}d}" for i in range(d)]


def _box(d: int, lo: float, hi: float) -> SearchSpace:
    return make_space({name: (lo, hi) for name in dim_names(d)})


@dataclass(frozen=True)
class TestFunction:
    """A benchmark objective with its canonical box and known optimum."""

    name: str
    dim: int
    space: SearchSpace
    optimum: float
    minimizers: tuple[tuple[float, ...], ...]
    _value: Callable[[np.ndarray], float]

    def __call__(self, p: ParamVector) -> float:
        return self._value(self.space.to_array(p))


def make_test_function(name: str, dims: int = 2) -> TestFunction:
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if name == "sphere":
        return TestFunction(
            "sphere",
            dims,
            _box(dims, -5.0, 5.0),
            0.0,
            ((0.0,) * dims,),
            sphere_value,
        )
    if name == "rosenbrock":
        if dims < 2:
            raise ValueError("rosenbrock needs dims >= 2")
        return TestFunction(
            "rosenbrock",
            dims,
            _box(dims, -2.048, 2.048),
            0.0,
            ((1.0,) * dims,),
            rosenbrock_value,
        )
    if name == "branin":
        if dims != 2:
            raise ValueError("branin is defined for exactly 2 dims")
        names = dim_names(2)
        space = make_space({names[0]: (-5.0, 10.0), names[1]: (0.0, 15.0)})
        return TestFunction(
            "branin",
            2,
            space,
            BRANIN_OPTIMUM,
            (
                (-math.pi, 12.275),
                (math.pi, 2.275),
                (3.0 * math.pi, 2.475),
            ),
            branin_value,
        )
    raise ValueError(f"unknown test function {name!r}; known: {list(BUILTIN_NAMES)}")
