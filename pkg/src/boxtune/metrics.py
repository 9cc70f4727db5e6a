"""Quality metrics: roc_auc, accuracy, mse.

roc_auc uses the tie-aware rank statistic: with fractional (midrank)
ranks over the pooled scores, AUC = (R_pos - n_pos(n_pos+1)/2) /
(n_pos * n_neg), which equals the probability that a random positive
outscores a random negative, counting ties as half.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateLabels, EmptyInput, LengthMismatch


def _check_lengths(a: Sequence, b: Sequence, what: str) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"{what}: {len(a)} labels vs {len(b)} values")


def _fractional_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank range."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def roc_auc(labels: Sequence[int], scores: Sequence[float]) -> float:
    """Area under the ROC curve for binary labels (positive = truthy)."""
    _check_lengths(labels, scores, "roc_auc")
    if len(labels) == 0:
        raise EmptyInput("roc_auc needs at least one instance")
    y = np.asarray([bool(l) for l in labels])
    s = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels("roc_auc needs both classes present")
    ranks = _fractional_ranks(s)
    rank_sum_pos = float(ranks[y].sum())
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def accuracy(labels: Sequence, predictions: Sequence) -> float:
    """Fraction of exact matches."""
    _check_lengths(labels, predictions, "accuracy")
    if len(labels) == 0:
        raise EmptyInput("accuracy needs at least one instance")
    hits = sum(1 for a, b in zip(labels, predictions) if a == b)
    return hits / len(labels)


def mse(targets: Sequence[float], predictions: Sequence[float]) -> float:
    """Mean squared error."""
    _check_lengths(targets, predictions, "mse")
    if len(targets) == 0:
        raise EmptyInput("mse needs at least one instance")
    return float(
        math.fsum((float(t) - float(p)) ** 2 for t, p in zip(targets, predictions))
        / len(targets)
    )


METRICS: dict[str, Callable] = {
    "roc_auc": roc_auc,
    "accuracy": accuracy,
    "mse": mse,
}
