"""Covariance matrix adaptation evolution strategy.

Rank-one and rank-mu covariance updates with cumulative step-size
adaptation, using the standard parameterization: population size
lambda = 4 + floor(3 ln n), log-linear recombination weights over the
best half, and the usual learning rates derived from n and mu_eff.

The state lives in box coordinates over the non-degenerate axes;
degenerate axes stay frozen at their single value. When no explicit
``sigma0`` is given, the initial step is 0.3 times the widest axis and
the initial covariance is diagonal with per-axis variances proportional
to the squared axis widths, so unequal boxes start scale-aware.
Samples are clamped into the box before evaluation, while the
distribution update uses the unclamped samples ranked by the clamped
evaluations. After every update the covariance is re-symmetrized and
its eigenvalues floored at 1e-20 times the largest one; a non-finite
mean, step size, or covariance raises :class:`CovarianceDegenerate`.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Mapping, Sequence

import numpy as np

from ..core import EvalLoop
from ..errors import CovarianceDegenerate
from ..space import ParamVector, SearchSpace

TOLX = 1e-11
TOLFUN = 1e-12
MAX_CONDITION = 1e14
EIGEN_FLOOR_RATIO = 1e-20
SIGMA0_FRACTION = 0.3

ALLOWED_SETTINGS = ("sigma0", "lambda", "start")
DEFAULTS: dict[str, object] = {"sigma0": None, "lambda": None, "start": None}


def validate_settings(settings: Mapping[str, object]) -> None:
    lam = settings.get("lambda")
    if lam is not None:
        if not isinstance(lam, int) or isinstance(lam, bool):
            raise ValueError("lambda must be an integer >= 2")
        if lam < 2:
            raise ValueError("lambda must be an integer >= 2")
    sigma0 = settings.get("sigma0")
    if sigma0 is not None:
        if not isinstance(sigma0, (int, float)) or isinstance(sigma0, bool):
            raise ValueError("sigma0 must be a positive number")
        if not math.isfinite(sigma0) or sigma0 <= 0:
            raise ValueError("sigma0 must be a positive finite number")
    start = settings.get("start")
    if start is not None and not isinstance(start, Mapping):
        raise ValueError("start must be a mapping of name -> value")


def default_popsize(dim: int) -> int:
    return 4 + int(3 * math.log(dim))


class CmaesState:
    """Ask/tell sampler that minimizes over a box.

    ``ask`` draws one population of candidates (clamped into the box);
    ``tell`` consumes one loss per candidate (``None`` marks a failed
    evaluation) and adapts mean, step size, and covariance.
    """

    def __init__(
        self,
        space: SearchSpace,
        seed: int | np.random.Generator = 0,
        popsize: int | None = None,
        sigma0: float | None = None,
        start: Mapping[str, float] | None = None,
    ) -> None:
        self.space = space
        self._free = [i for i in range(space.dim) if space.lowers[i] < space.uppers[i]]
        if not self._free:
            raise ValueError("space has no non-degenerate axis to adapt over")
        if isinstance(seed, np.random.Generator):
            self._rng = seed
        else:
            self._rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))

        n = len(self._free)
        self.n = n
        self.lam = default_popsize(n) if popsize is None else int(popsize)
        if self.lam < 2:
            raise ValueError("popsize must be an integer >= 2")
        self.mu = self.lam // 2
        raw = np.array(
            [math.log((self.lam + 1) / 2) - math.log(i + 1) for i in range(self.mu)]
        )
        self.weights = raw / raw.sum()
        self.mueff = 1.0 / float(np.sum(self.weights**2))

        self.cc = (4 + self.mueff / n) / (n + 4 + 2 * self.mueff / n)
        self.cs = (self.mueff + 2) / (n + self.mueff + 5)
        self.c1 = 2 / ((n + 1.3) ** 2 + self.mueff)
        self.cmu = min(
            1 - self.c1,
            2 * (self.mueff - 2 + 1 / self.mueff) / ((n + 2) ** 2 + self.mueff),
        )
        self.damps = (
            1 + 2 * max(0.0, math.sqrt((self.mueff - 1) / (n + 1)) - 1) + self.cs
        )
        self.chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n**2))

        self._lo = np.asarray([space.lowers[i] for i in self._free], dtype=float)
        self._hi = np.asarray([space.uppers[i] for i in self._free], dtype=float)
        widths = self._hi - self._lo
        widest = float(widths.max())
        if start is None:
            self.mean = (self._lo + self._hi) / 2.0
        else:
            full = space.to_array(space.clamp(space.from_dict(dict(start))))
            self.mean = full[self._free].astype(float)
        self.sigma = SIGMA0_FRACTION * widest if sigma0 is None else float(sigma0)
        self.cov = np.diag((widths / widest) ** 2)
        self.pc = np.zeros(n)
        self.ps = np.zeros(n)
        self.generation = 0
        self._pending: np.ndarray | None = None
        self._history: deque[float] = deque(
            maxlen=10 + int(math.ceil(30 * n / self.lam))
        )
        self._last_spread = math.inf
        self._refresh_eigensystem()

    def _embed(self, x: np.ndarray) -> ParamVector:
        full = np.asarray(self.space.lowers, dtype=float)
        full[self._free] = np.clip(x, self._lo, self._hi)
        return self.space.vector(full)

    def ask(self) -> list[ParamVector]:
        if self._pending is not None:
            raise RuntimeError("tell() must consume the previous ask() first")
        z = self._rng.standard_normal((self.lam, self.n))
        with np.errstate(over="ignore", invalid="ignore"):
            xs = self.mean + self.sigma * (z * self._scales) @ self._basis.T
        if not np.all(np.isfinite(xs)):
            raise CovarianceDegenerate("sampling produced non-finite candidates")
        self._pending = xs
        return [self._embed(x) for x in xs]

    def tell(self, losses: Sequence[float | None]) -> None:
        if self._pending is None:
            raise RuntimeError("tell() without a pending ask()")
        xs = self._pending
        self._pending = None
        if len(losses) != self.lam:
            raise ValueError(f"expected {self.lam} losses, got {len(losses)}")
        vals = [math.inf if l is None else float(l) for l in losses]
        order = sorted(range(self.lam), key=lambda i: (vals[i], i))
        selected = xs[order[: self.mu]]

        old_mean = self.mean
        new_mean = self.weights @ selected
        shift = (new_mean - old_mean) / self.sigma

        self.generation += 1
        self.ps = (1 - self.cs) * self.ps + math.sqrt(
            self.cs * (2 - self.cs) * self.mueff
        ) * (self._invsqrt @ shift)
        hsig = float(np.sum(self.ps**2)) / self.n / (
            1 - (1 - self.cs) ** (2 * self.generation)
        ) < 2 + 4 / (self.n + 1)
        self.pc = (1 - self.cc) * self.pc + hsig * math.sqrt(
            self.cc * (2 - self.cc) * self.mueff
        ) * shift

        steps = (selected - old_mean) / self.sigma
        rank_mu = steps.T @ (self.weights[:, None] * steps)
        decay = 1 - self.c1 - self.cmu + (1 - hsig) * self.c1 * self.cc * (2 - self.cc)
        self.cov = (
            decay * self.cov + self.c1 * np.outer(self.pc, self.pc) + self.cmu * rank_mu
        )
        self.sigma *= math.exp(
            min(1.0, (self.cs / self.damps) * (np.linalg.norm(self.ps) / self.chi_n - 1))
        )
        self.mean = new_mean

        if (
            not np.all(np.isfinite(self.cov))
            or not np.all(np.isfinite(self.mean))
            or not math.isfinite(self.sigma)
        ):
            raise CovarianceDegenerate("non-finite mean, step size, or covariance")
        self._refresh_eigensystem()

        finite = [v for v in vals if math.isfinite(v)]
        self._last_spread = (max(finite) - min(finite)) if finite else math.inf
        self._history.append(min(vals))

    def _refresh_eigensystem(self) -> None:
        self.cov = (self.cov + self.cov.T) / 2.0
        eigvals, basis = np.linalg.eigh(self.cov)
        if not np.all(np.isfinite(eigvals)):
            raise CovarianceDegenerate("non-finite covariance eigenvalues")
        top = float(eigvals[-1])
        if top <= 0:
            raise CovarianceDegenerate("covariance lost positive definiteness")
        floor = EIGEN_FLOOR_RATIO * top
        if eigvals[0] < floor:
            eigvals = np.maximum(eigvals, floor)
            self.cov = (basis * eigvals) @ basis.T
        self._basis = basis
        self._scales = np.sqrt(eigvals)
        self._invsqrt = (basis / self._scales) @ basis.T

    def condition_number(self) -> float:
        return float((self._scales[-1] / self._scales[0]) ** 2)

    def should_stop(self) -> str | None:
        if self.condition_number() > MAX_CONDITION:
            return "ill_conditioned"
        axis_dev = self.sigma * np.sqrt(np.diag(self.cov))
        if np.all(axis_dev < TOLX) and np.all(self.sigma * np.abs(self.pc) < TOLX):
            return "converged"
        if (
            len(self._history) == self._history.maxlen
            and max(self._history) - min(self._history) < TOLFUN
            and self._last_spread < TOLFUN
        ):
            return "converged"
        return None


def run(loop: EvalLoop, settings: Mapping[str, object], rng: np.random.Generator) -> str:
    space = loop.space
    if not any(lo < hi for lo, hi in zip(space.lowers, space.uppers)):
        loop.ask([space.center()])
        return "converged"

    start = settings.get("start")
    sigma0 = settings.get("sigma0")
    state = CmaesState(
        space,
        seed=rng,
        popsize=settings.get("lambda"),
        sigma0=None if sigma0 is None else float(sigma0),
        start=None if start is None else dict(start),
    )
    while True:
        if loop.exhausted:
            return "budget"
        candidates = state.ask()
        losses = loop.ask(candidates)
        if len(losses) < len(candidates):
            return "budget"
        state.tell(losses)
        reason = state.should_stop()
        if reason is not None:
            return reason
