"""Search spaces, parameter vectors, and per-evaluation records.

A :class:`SearchSpace` is an ordered set of named closed intervals
``[lower, upper]``; dimensions are kept in a canonical order
(lexicographic by name) so the same bounds mapping always produces the
same space. Degenerate dimensions (``lower == upper``) are legal and act
as constants. A :class:`ParamVector` is one point of such a space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import EmptySpace, InvalidBound, NameMismatch


@dataclass(frozen=True)
class ParamVector:
    """A named point; immutable and hashable so call logs can dedupe on it."""

    names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.values):
            raise NameMismatch(
                f"{len(self.names)} names but {len(self.values)} values"
            )

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values))

    def __getitem__(self, name: str) -> float:
        try:
            return self.values[self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(zip(self.names, self.values))

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class TrialRecord:
    """One evaluated point. ``score is None`` marks a failed evaluation."""

    params: ParamVector
    score: float | None
    eval_index: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.score is None


@dataclass(frozen=True)
class SearchSpace:
    """Named box constraints; construct through :func:`make_space`."""

    names: tuple[str, ...]
    lowers: tuple[float, ...]
    uppers: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.names)

    def bounds(self, name: str) -> tuple[float, float]:
        i = self.names.index(name)
        return self.lowers[i], self.uppers[i]

    def widths(self) -> np.ndarray:
        return np.asarray(self.uppers, dtype=float) - np.asarray(
            self.lowers, dtype=float
        )

    def center(self) -> ParamVector:
        mid = [(lo + hi) / 2.0 for lo, hi in zip(self.lowers, self.uppers)]
        return self.vector(mid)

    def vector(self, values: Sequence[float]) -> ParamVector:
        """Build a ParamVector in this space's canonical order."""
        if len(values) != self.dim:
            raise NameMismatch(
                f"expected {self.dim} values, got {len(values)}"
            )
        return ParamVector(self.names, tuple(float(v) for v in values))

    def from_dict(self, values: Mapping[str, float]) -> ParamVector:
        if set(values) != set(self.names):
            raise NameMismatch(
                f"names {sorted(values)} do not match space {list(self.names)}"
            )
        return self.vector([values[n] for n in self.names])

    def to_array(self, p: ParamVector) -> np.ndarray:
        self._check_names(p)
        return np.asarray(p.values, dtype=float)

    def contains(self, p: ParamVector) -> bool:
        """True iff every component lies in its closed interval."""
        self._check_names(p)
        return all(
            lo <= v <= hi
            for v, lo, hi in zip(p.values, self.lowers, self.uppers)
        )

    def clamp(self, p: ParamVector) -> ParamVector:
        """Project every component onto [lower, upper]; idempotent."""
        self._check_names(p)
        return self.vector(
            [
                min(max(v, lo), hi)
                for v, lo, hi in zip(p.values, self.lowers, self.uppers)
            ]
        )

    def clamp_array(self, x: np.ndarray) -> np.ndarray:
        """Clamp a (..., dim) coordinate array to the box."""
        return np.clip(x, np.asarray(self.lowers), np.asarray(self.uppers))

    def to_json(self) -> dict[str, list[float]]:
        """Wire form: an object of name -> [lower, upper]."""
        return {
            n: [lo, hi]
            for n, lo, hi in zip(self.names, self.lowers, self.uppers)
        }

    @staticmethod
    def from_json(obj: Mapping[str, Sequence[float]]) -> "SearchSpace":
        return make_space({n: (b[0], b[1]) for n, b in obj.items()})

    def _check_names(self, p: ParamVector) -> None:
        if p.names != self.names:
            raise NameMismatch(
                f"vector names {list(p.names)} do not match "
                f"space {list(self.names)}"
            )


def make_space(
    bounds: Mapping[str, tuple[float, float] | Sequence[float]],
) -> SearchSpace:
    """Create a SearchSpace from a mapping of name -> (lower, upper).

    Dimensions are sorted lexicographically by name so the same mapping
    always yields the same space regardless of insertion order.
    """
    if not bounds:
        raise EmptySpace("search space needs at least one dimension")
    names, lowers, uppers = [], [], []
    for name in sorted(bounds):
        if not isinstance(name, str) or not name:
            raise InvalidBound(f"dimension name must be a nonempty string: {name!r}")
        pair = tuple(bounds[name])
        if len(pair) != 2:
            raise InvalidBound(f"{name}: bounds must be a (lower, upper) pair")
        lo, hi = float(pair[0]), float(pair[1])
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidBound(f"{name}: bounds must be finite, got ({lo}, {hi})")
        if lo > hi:
            raise InvalidBound(f"{name}: lower {lo} exceeds upper {hi}")
        names.append(name)
        lowers.append(lo)
        uppers.append(hi)
    return SearchSpace(tuple(names), tuple(lowers), tuple(uppers))


def contains(space: SearchSpace, p: ParamVector) -> bool:
    return space.contains(p)


def clamp(space: SearchSpace, p: ParamVector) -> ParamVector:
    return space.clamp(p)
