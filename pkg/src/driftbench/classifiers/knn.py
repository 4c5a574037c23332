from __future__ import annotations

import numpy as np

from ._kernels import knn_vote
from .base import Estimator


class KNeighbors(Estimator):
    """k-nearest-neighbour majority vote under the Euclidean metric.

    Stores the training set.  Distance ties are broken by training order
    (lower index first); ``k`` must be odd so binary votes cannot tie.
    """

    kind = "KNN"
    requires_both_classes = False

    def __init__(self, k=5):
        self.k = k

    def _fit(self, X, y, seed):
        if self.k < 1 or self.k % 2 == 0:
            raise ValueError(f"k must be a positive odd integer, got {self.k}")
        self.X_ = X.copy()
        self.y_ = y.astype(np.int64)

    @property
    def n_stored_(self) -> int:
        return self.X_.shape[0]

    def predict(self, X):
        X = self._check_X(X)
        votes = knn_vote(self.X_, self.y_, X, self.k)
        return np.where(votes > 0, 1, -1).astype(np.int8)

    def _state(self):
        return {"X": self.X_, "y": self.y_}

    def _load_state(self, state):
        self.X_ = np.asarray(state["X"], dtype=float).reshape(-1, self.n_features_in_)
        self.y_ = np.asarray(state["y"], dtype=np.int64)
