"""Soft-margin RBF support vector classifier trained with SMO."""
from __future__ import annotations

import numpy as np

from ._kernels import rbf_decision, smo_solve
from .base import Estimator


class SVMClassifier(Estimator):
    """Binary C-SVM with an RBF kernel.

    Parameters
    ----------
    C : float, default 1.0
        Box constraint on the dual variables.
    gamma : float or "scale", default "scale"
        RBF width; "scale" uses ``1 / (d * X.var())`` over all training features.
    tol : float, default 1e-3
        Stop when the maximal KKT violation ``m(a) - M(a)`` drops below this.
    cache_mb : float, default 256
        Memory bound for cached kernel rows.
    max_iter : int, default 10_000_000
    """

    kind = "SVM"

    def __init__(self, C=1.0, gamma="scale", tol=1e-3, cache_mb=256.0, max_iter=10_000_000):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.cache_mb = cache_mb
        self.max_iter = max_iter

    def _fit(self, X, y, seed):
        if self.C <= 0:
            raise ValueError("C must be positive")
        if self.gamma == "scale":
            var = X.var()
            gamma = 1.0 / (X.shape[1] * var) if var > 0 else 1.0
        else:
            gamma = float(self.gamma)
        yf = y.astype(float)
        n = X.shape[0]
        cache_rows = int(self.cache_mb * 2**20 // (8 * n))
        alpha, rho, n_iter, converged, rows, violation = smo_solve(
            X, yf, float(self.C), gamma, float(self.tol), cache_rows, int(self.max_iter)
        )
        sv = alpha > 0
        self.gamma_ = gamma
        self.support_ = np.flatnonzero(sv)
        self.support_vectors_ = X[sv].copy()
        self.alpha_ = alpha[sv]
        self.dual_coef_ = alpha[sv] * yf[sv]
        self.rho_ = float(rho)
        self.n_iter_ = int(n_iter)
        self.converged_ = bool(converged)
        self.kkt_violation_ = float(violation)
        self.kernel_rows_computed_ = int(rows)
        # equality-constraint residual, reported for diagnostics
        self.dual_residual_ = float(np.sum(alpha * yf))

    def decision_function(self, X):
        X = self._check_X(X)
        return rbf_decision(self.support_vectors_, self.dual_coef_, self.rho_, self.gamma_, X)

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1).astype(np.int8)

    def _state(self):
        return {
            "gamma": self.gamma_,
            "support_vectors": self.support_vectors_,
            "dual_coef": self.dual_coef_,
            "alpha": self.alpha_,
            "rho": self.rho_,
            "n_iter": self.n_iter_,
            "converged": self.converged_,
        }

    def _load_state(self, state):
        self.gamma_ = float(state["gamma"])
        self.support_vectors_ = np.asarray(state["support_vectors"], dtype=float).reshape(-1, self.n_features_in_)
        self.dual_coef_ = np.asarray(state["dual_coef"], dtype=float)
        self.alpha_ = np.asarray(state["alpha"], dtype=float)
        self.rho_ = float(state["rho"])
        self.n_iter_ = int(state["n_iter"])
        self.converged_ = bool(state["converged"])
