"""k-fold cross-validation plans with strata, clusters, and repeats.

Assignment order per iteration: clusters first (largest first, each to
the currently smallest fold, so one fold never outgrows the others by
more than the largest cluster), then each stratum's members dealt
cyclically over the folds ordered by current size (per-stratum spread
stays within one), then the remaining instances one by one to the
smallest fold. Ties between equally sized folds are broken by a fold
permutation drawn once per iteration, and every iteration uses an
independent substream of the master seed.

An index may belong to at most one stratum or cluster; membership in
both would make the spread and integrity rules contradict, so it is
rejected at construction.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import fmean
from typing import Callable, Mapping, Sequence

import numpy as np

from .batch import is_concurrency_safe
from .errors import (
    CrossValidationError,
    IndexOutOfRange,
    InvalidFoldCount,
    OverlappingGroups,
)

Indices = tuple[int, ...]
InnerFn = Callable[[Indices, Indices], float]


def _disjoint(groups: Sequence[frozenset[int]], label: str) -> None:
    seen: set[int] = set()
    for g in groups:
        overlap = seen & g
        if overlap:
            raise OverlappingGroups(f"{label} share indices {sorted(overlap)}")
        seen |= g


@dataclass(frozen=True)
class GroupingSpec:
    """Disjoint strata (spread across folds) and clusters (kept together)."""

    strata: tuple[frozenset[int], ...] = ()
    clusters: tuple[frozenset[int], ...] = ()

    def __post_init__(self) -> None:
        strata = tuple(frozenset(int(i) for i in s) for s in self.strata)
        clusters = tuple(frozenset(int(i) for i in c) for c in self.clusters)
        object.__setattr__(self, "strata", strata)
        object.__setattr__(self, "clusters", clusters)
        for g in strata + clusters:
            if not g:
                raise ValueError("group sets must be nonempty")
            if any(i < 0 for i in g):
                raise IndexOutOfRange(f"negative index in group: {sorted(g)}")
        _disjoint(strata, "strata")
        _disjoint(clusters, "clusters")
        in_strata = frozenset().union(*strata) if strata else frozenset()
        in_clusters = frozenset().union(*clusters) if clusters else frozenset()
        both = in_strata & in_clusters
        if both:
            raise OverlappingGroups(
                f"indices {sorted(both)} are in both a stratum and a cluster"
            )

    def grouped(self) -> frozenset[int]:
        return frozenset().union(frozenset(), *self.strata, *self.clusters)


@dataclass(frozen=True)
class FoldPlan:
    """Fold index per instance, one row per iteration."""

    num_instances: int
    num_folds: int
    num_iter: int
    assignments: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.assignments) != self.num_iter:
            raise ValueError("one assignment row per iteration required")
        for row in self.assignments:
            if len(row) != self.num_instances:
                raise ValueError("each row must assign every instance")
            if any(f < 0 or f >= self.num_folds for f in row):
                raise ValueError("fold index out of range")

    def fold_members(self, iteration: int, fold: int) -> Indices:
        row = self.assignments[iteration]
        return tuple(i for i, f in enumerate(row) if f == fold)

    def split(self, iteration: int, fold: int) -> tuple[Indices, Indices]:
        """(train, test) index tuples for one cell."""
        row = self.assignments[iteration]
        test = tuple(i for i, f in enumerate(row) if f == fold)
        train = tuple(i for i, f in enumerate(row) if f != fold)
        return train, test

    def to_json(self) -> dict[str, object]:
        return {
            "num_instances": self.num_instances,
            "num_folds": self.num_folds,
            "num_iter": self.num_iter,
            "assignments": [list(row) for row in self.assignments],
        }

    @staticmethod
    def from_json(obj: Mapping[str, object]) -> "FoldPlan":
        return FoldPlan(
            int(obj["num_instances"]),
            int(obj["num_folds"]),
            int(obj["num_iter"]),
            tuple(tuple(int(f) for f in row) for row in obj["assignments"]),
        )


def _check_grouping(n: int, grouping: GroupingSpec) -> None:
    for g in grouping.strata + grouping.clusters:
        bad = [i for i in g if i >= n]
        if bad:
            raise IndexOutOfRange(f"group indices {sorted(bad)} out of range for n={n}")


def _assign_one_iteration(
    n: int, k: int, grouping: GroupingSpec, rng: np.random.Generator
) -> list[int]:
    assignment = [-1] * n
    sizes = [0] * k
    # one permutation per iteration; rank breaks ties between equal folds
    rank = {int(f): pos for pos, f in enumerate(rng.permutation(k))}

    def smallest_fold() -> int:
        return min(range(k), key=lambda f: (sizes[f], rank[f]))

    clusters = sorted(grouping.clusters, key=lambda c: (-len(c), min(c)))
    for cluster in clusters:
        fold = smallest_fold()
        for i in sorted(cluster):
            assignment[i] = fold
        sizes[fold] += len(cluster)

    for stratum in grouping.strata:
        members = [int(i) for i in rng.permutation(sorted(stratum))]
        order = sorted(range(k), key=lambda f: (sizes[f], rank[f]))
        for pos, i in enumerate(members):
            fold = order[pos % k]
            assignment[i] = fold
            sizes[fold] += 1

    remaining = [i for i in range(n) if assignment[i] < 0]
    for i in rng.permutation(remaining) if remaining else []:
        fold = smallest_fold()
        assignment[int(i)] = fold
        sizes[fold] += 1
    return assignment


def generate_folds(
    n: int,
    k: int,
    r: int = 1,
    grouping: GroupingSpec | None = None,
    seed: int = 0,
) -> FoldPlan:
    """Deterministic fold plan; iterations draw independent substreams."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 2 or k > n:
        raise InvalidFoldCount(f"need 2 <= k <= n, got k={k}, n={n}")
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise InvalidFoldCount(f"num_iter must be a positive integer, got {r}")
    grouping = grouping or GroupingSpec()
    _check_grouping(n, grouping)
    streams = np.random.SeedSequence(seed % 2**64).spawn(r)
    rows = [
        tuple(_assign_one_iteration(n, k, grouping, np.random.default_rng(s)))
        for s in streams
    ]
    return FoldPlan(n, k, r, tuple(rows))


def cross_validated_score(
    inner: InnerFn,
    plan: FoldPlan,
    aggregator: Callable[[Sequence[float]], float] | None = None,
) -> float:
    """Aggregate inner(train, test) over every (iteration, fold) cell.

    Cells run concurrently when ``inner`` is marked concurrency-safe;
    aggregation order is fixed either way. Inner failures are re-raised
    annotated with the failing cell.
    """
    cells = [
        (it, fold) for it in range(plan.num_iter) for fold in range(plan.num_folds)
    ]

    def run_cell(cell: tuple[int, int]) -> float:
        it, fold = cell
        train, test = plan.split(it, fold)
        try:
            return float(inner(train, test))
        except Exception as exc:
            raise CrossValidationError(
                f"inner objective failed at iteration {it}, fold {fold}: {exc}"
            ) from exc

    if is_concurrency_safe(inner) and len(cells) > 1:
        with ThreadPoolExecutor() as pool:
            scores = list(pool.map(run_cell, cells))
    else:
        scores = [run_cell(cell) for cell in cells]
    agg = fmean if aggregator is None else aggregator
    return float(agg(scores))
