from __future__ import annotations

import numpy as np

from .base import Estimator

_CLASSES = (-1, 1)


class GaussianNB(Estimator):
    """Gaussian naive Bayes with maximum-likelihood (biased) variances.

    Every variance is inflated by ``var_smoothing * max_j Var(X[:, j])``.
    Equal joint log-likelihoods resolve to +1.  With a single training
    class the model predicts that class everywhere.
    """

    kind = "GNB"
    requires_both_classes = False

    def __init__(self, var_smoothing=1e-9):
        self.var_smoothing = var_smoothing

    def _fit(self, X, y, seed):
        eps = self.var_smoothing * float(np.max(X.var(axis=0)))
        self.classes_ = np.array([c for c in _CLASSES if np.any(y == c)], dtype=np.int8)
        self.theta_ = np.array([X[y == c].mean(axis=0) for c in self.classes_])
        self.var_ = np.array([X[y == c].var(axis=0) for c in self.classes_]) + eps
        self.class_prior_ = np.array([np.mean(y == c) for c in self.classes_])
        self.epsilon_ = eps

    def joint_log_likelihood(self, X):
        X = self._check_X(X)
        jll = np.empty((X.shape[0], self.classes_.size))
        for k in range(self.classes_.size):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var_[k]))
            ll = ll - 0.5 * np.sum((X - self.theta_[k]) ** 2 / self.var_[k], axis=1)
            jll[:, k] = np.log(self.class_prior_[k]) + ll
        return jll

    def predict(self, X):
        jll = self.joint_log_likelihood(X)
        if self.classes_.size == 1:
            return np.full(jll.shape[0], self.classes_[0], dtype=np.int8)
        return np.where(jll[:, 1] >= jll[:, 0], 1, -1).astype(np.int8)

    def _state(self):
        return {"classes": self.classes_, "theta": self.theta_, "var": self.var_,
                "class_prior": self.class_prior_, "epsilon": self.epsilon_}

    def _load_state(self, state):
        self.classes_ = np.asarray(state["classes"], dtype=np.int8)
        k = self.classes_.size
        self.theta_ = np.asarray(state["theta"], dtype=float).reshape(k, self.n_features_in_)
        self.var_ = np.asarray(state["var"], dtype=float).reshape(k, self.n_features_in_)
        self.class_prior_ = np.asarray(state["class_prior"], dtype=float)
        self.epsilon_ = float(state["epsilon"])
