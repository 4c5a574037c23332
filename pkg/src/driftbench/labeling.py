"""Class posterior functions shared by the training and test sets.

The posterior ``p(y=+1 | x)`` is the same for every dataset of an experiment,
which is what makes the shift a pure covariate shift.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._rng import make_generator
from .exceptions import DimensionError
from .gauss import SampleMatrix


class PosteriorFn(enum.Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"

    @property
    def dim(self) -> int:
        return 2 if self in (PosteriorFn.F1, PosteriorFn.F2) else 4

    @property
    def link(self):
        """The squashing function: tanh for F1/F3, sin for F2/F4."""
        return np.tanh if self in (PosteriorFn.F1, PosteriorFn.F3) else np.sin

    def argument(self, x) -> np.ndarray | float:
        """Inner argument of the tanh/sin; its sign is the Bayes label."""
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DimensionError(f"{self.value} takes {self.dim}-dimensional inputs, got shape {np.shape(x)}")
        kink = np.minimum(0.0, X[:, 0])
        if self is PosteriorFn.F1:
            u = kink + 4.0 * X[:, 1]
        elif self is PosteriorFn.F2:
            u = kink + 2.0 * X[:, 1]
        elif self is PosteriorFn.F3:
            u = kink - X[:, 1] + 2.0 * X[:, 2] + 2.0 * X[:, 3]
        else:
            u = kink + 4.0 * X[:, 1] - 3.0 * X[:, 2] + 2.0 * X[:, 3]
        return float(u[0]) if single else u

    def __call__(self, x):
        return posterior(self, x)


def posterior(fn: PosteriorFn, x) -> np.ndarray | float:
    """p(y=+1 | x) for a single point or for every row of ``x``."""
    return 0.5 * (1.0 + fn.link(fn.argument(x)))


def bayes_label(fn: PosteriorFn, x) -> np.ndarray | int:
    """+1 where the posterior is >= 1/2, else -1 (ties go to +1)."""
    p = posterior(fn, x)
    if np.ndim(p) == 0:
        return 1 if p >= 0.5 else -1
    return np.where(p >= 0.5, 1, -1).astype(np.int8)


class Source(str, enum.Enum):
    TRAIN = "train"
    TEST_SAME = "test_same"
    TEST_DRIFTED = "test_drifted"
    REGION_EVAL = "region_eval"


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Points with +/-1 labels and the posterior values they were drawn from.

    ``ratios`` and ``regions`` are filled in for region-evaluation samples.
    """

    points: np.ndarray
    labels: np.ndarray
    posterior_values: np.ndarray
    source: Source
    posterior_fn: PosteriorFn
    ratios: np.ndarray | None = None
    regions: np.ndarray | None = None

    def __post_init__(self):
        n = self.points.shape[0]
        for name in ("labels", "posterior_values", "ratios", "regions"):
            arr = getattr(self, name)
            if arr is not None and arr.shape != (n,):
                raise DimensionError(f"{name} has shape {arr.shape}, expected ({n},)")
        if not np.all((self.labels == 1) | (self.labels == -1)):
            raise ValueError("labels must be +1 or -1")
        if np.any(self.posterior_values < 0) or np.any(self.posterior_values > 1):
            raise ValueError("posterior values must lie in [0, 1]")

    def __len__(self):
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _points(points) -> np.ndarray:
    return points.points if isinstance(points, SampleMatrix) else np.asarray(points, dtype=float)


def sample_labels(fn: PosteriorFn, points, seed: int, source: Source = Source.TRAIN) -> LabeledDataset:
    """Draw each label independently: +1 with probability ``posterior(fn, x_i)``."""
    X = _points(points)
    p = posterior(fn, X)
    u = make_generator(seed).random(X.shape[0])
    labels = np.where(u < p, 1, -1).astype(np.int8)
    return LabeledDataset(X, labels, p, Source(source), fn)


def bayes_labels(fn: PosteriorFn, points, source: Source = Source.TRAIN) -> LabeledDataset:
    """Label every point with its Bayes-optimal class (noise-free labels)."""
    X = _points(points)
    p = posterior(fn, X)
    labels = np.where(p >= 0.5, 1, -1).astype(np.int8)
    return LabeledDataset(X, labels, p, Source(source), fn)
