"""Confusion-matrix metrics, degradation rates and correlation matrices."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import EmptyInputError, UndefinedCorrelationError, UndefinedRateError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @classmethod
    def from_labels(cls, y_true, y_pred, positive=1) -> "ConfusionCounts":
        t = np.asarray(y_true) == positive
        p = np.asarray(y_pred) == positive
        if t.shape != p.shape:
            raise ValueError(f"label arrays differ in shape: {t.shape} vs {p.shape}")
        return cls(
            tp=int(np.sum(t & p)),
            tn=int(np.sum(~t & ~p)),
            fp=int(np.sum(~t & p)),
            fn=int(np.sum(t & ~p)),
        )


@dataclass(frozen=True)
class MetricBundle:
    accuracy: float
    f1: float
    mcc: float
    f1_degenerate: bool = False
    mcc_degenerate: bool = False

    def as_row(self) -> dict:
        return {"acc": self.accuracy, "f1": self.f1, "mcc": self.mcc}

    def to_dict(self) -> dict:
        return asdict(self)


def compute_metrics(counts: ConfusionCounts) -> MetricBundle:
    """Accuracy, F1 and Matthews correlation from a confusion matrix.

    F1 is 0 (flagged degenerate) when there are no predicted or no actual
    positives; MCC is 0 (flagged) when any marginal in its denominator is 0.
    """
    tp, tn, fp, fn = counts.tp, counts.tn, counts.fp, counts.fn
    total = counts.total
    if total == 0:
        raise EmptyInputError("metrics of an empty confusion matrix")
    accuracy = (tp + tn) / total

    f1_degenerate = (tp + fp) == 0 or (tp + fn) == 0
    if f1_degenerate or tp == 0:
        f1 = 0.0
    else:
        precision = tp / (tp + fp)
        recall = tp / (tp + fn)
        f1 = 2 * precision * recall / (precision + recall)

    marginals = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc_degenerate = marginals == 0
    mcc = 0.0 if mcc_degenerate else (tp * tn - fp * fn) / math.sqrt(marginals)
    return MetricBundle(accuracy, f1, mcc, f1_degenerate, mcc_degenerate)


def evaluate(y_true, y_pred) -> MetricBundle:
    return compute_metrics(ConfusionCounts.from_labels(y_true, y_pred))


def degradation_rate(metric_same: float, metric_drifted: float) -> float:
    """Percentage drop from the same-distribution to the drifted metric.

    Negative when the drifted score is higher.
    """
    if metric_same == 0:
        raise UndefinedRateError("degradation rate is undefined for a zero baseline")
    return 100.0 * (metric_same - metric_drifted) / metric_same


def pearson_matrix(columns: dict) -> tuple[list[str], np.ndarray]:
    """Pairwise Pearson correlation of equally long named columns.

    Returns the column names and the symmetric correlation matrix with an
    exact unit diagonal.
    """
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    if not data:
        raise EmptyInputError("no columns given")
    n = data[0].size
    if n < 2 or any(c.shape != (n,) for c in data):
        raise ValueError("columns must be 1-D, of equal length >= 2")
    centered = []
    for name, col in zip(names, data):
        c = col - col.mean()
        ss = float(c @ c)
        if ss == 0.0:
            raise UndefinedCorrelationError(f"column {name!r} has zero variance")
        centered.append(c / math.sqrt(ss))
    Z = np.vstack(centered)
    R = Z @ Z.T
    R = np.clip(0.5 * (R + R.T), -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return names, R
