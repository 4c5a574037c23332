"""Random forest of fully grown Gini CART trees on bootstrap samples."""
from __future__ import annotations

import math

import numpy as np

from ._kernels import build_tree, forest_votes
from .base import Estimator
from .._rng import make_generator


class RandomForest(Estimator):
    """Bagged CART ensemble with per-node feature subsampling.

    Parameters
    ----------
    n_estimators : int, default 100
    max_features : int or "sqrt", default "sqrt"
        Features tried per split; "sqrt" means ``floor(sqrt(d))``.  If none of
        the tried features admits a split, further features are tried.
    bootstrap : bool, default True

    Trees grow until every leaf is pure (minimum leaf size 1, no depth cap).
    Prediction is a majority vote of the trees; an even split goes to +1.
    """

    kind = "RF"

    def __init__(self, n_estimators=100, max_features="sqrt", bootstrap=True):
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.bootstrap = bootstrap

    def _n_features(self, d):
        if self.max_features == "sqrt":
            return max(1, int(math.isqrt(d)))
        return max(1, min(d, int(self.max_features)))

    def _fit(self, X, y, seed):
        if self.n_estimators < 1:
            raise ValueError("n_estimators must be >= 1")
        n, d = X.shape
        k = self._n_features(d)
        y01 = (y > 0).astype(np.int8)
        rng = make_generator(seed, "forest")
        tree_seeds = rng.integers(0, 2**63 - 1, size=self.n_estimators, dtype=np.int64)
        parts = []
        for tree_seed in tree_seeds:
            if self.bootstrap:
                samples = rng.integers(0, n, size=n, dtype=np.int64)
            else:
                samples = np.arange(n, dtype=np.int64)
            parts.append(build_tree(X, y01, samples, k, np.uint64(tree_seed))[:5])
        self._pack(parts)

    def _pack(self, parts):
        sizes = [p[0].size for p in parts]
        self.offsets_ = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self.feature_ = np.concatenate([p[0] for p in parts]).astype(np.int32)
        self.threshold_ = np.concatenate([p[1] for p in parts]).astype(float)
        self.left_ = np.concatenate([p[2] for p in parts]).astype(np.int32)
        self.right_ = np.concatenate([p[3] for p in parts]).astype(np.int32)
        self.value_ = np.concatenate([p[4] for p in parts]).astype(np.int8)

    @property
    def n_trees_(self) -> int:
        return self.offsets_.size - 1

    def tree_node_counts(self) -> np.ndarray:
        return np.diff(self.offsets_)

    def votes(self, X) -> np.ndarray:
        """Trees voting +1 at each row."""
        X = self._check_X(X)
        return forest_votes(self.offsets_, self.feature_, self.threshold_, self.left_,
                            self.right_, self.value_, X)

    def predict(self, X):
        v = self.votes(X)
        return np.where(2 * v >= self.n_trees_, 1, -1).astype(np.int8)

    def _state(self):
        return {"offsets": self.offsets_, "feature": self.feature_, "threshold": self.threshold_,
                "left": self.left_, "right": self.right_, "value": self.value_}

    def _load_state(self, state):
        self.offsets_ = np.asarray(state["offsets"], dtype=np.int64)
        self.feature_ = np.asarray(state["feature"], dtype=np.int32)
        self.threshold_ = np.asarray(state["threshold"], dtype=float)
        self.left_ = np.asarray(state["left"], dtype=np.int32)
        self.right_ = np.asarray(state["right"], dtype=np.int32)
        self.value_ = np.asarray(state["value"], dtype=np.int8)
