"""L2-regularized logistic regression fitted by damped Newton iterations."""
from __future__ import annotations

import numpy as np

from .base import Estimator


def _log1pexp(z):
    # log(1 + exp(z)) without overflow
    return np.logaddexp(0.0, z)


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticRegression(Estimator):
    """Minimizes ``0.5 ||w||^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b)))``.

    The intercept ``b`` is not penalized.  Iterates until the largest
    gradient component is at most ``tol`` or ``max_iter`` steps were taken.
    """

    kind = "LR"

    def __init__(self, C=1.0, tol=1e-6, max_iter=1000):
        self.C = C
        self.tol = tol
        self.max_iter = max_iter

    def _objective(self, theta, Xa, y):
        w = theta[:-1]
        return 0.5 * w @ w + self.C * np.sum(_log1pexp(-y * (Xa @ theta)))

    def _fit(self, X, y, seed):
        if self.C <= 0:
            raise ValueError("C must be positive")
        n, d = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        yf = y.astype(float)
        reg = np.ones(d + 1)
        reg[-1] = 0.0
        theta = np.zeros(d + 1)
        f = self._objective(theta, Xa, yf)
        converged = False
        it = 0
        for it in range(1, self.max_iter + 1):
            m = yf * (Xa @ theta)
            s = _sigmoid(-m)  # = 1 - sigma(m)
            grad = reg * theta - self.C * (Xa.T @ (yf * s))
            if np.max(np.abs(grad)) <= self.tol:
                converged = True
                it -= 1
                break
            h = s * (1.0 - s)
            H = (Xa.T * (self.C * h)) @ Xa + np.diag(reg)
            H[-1, -1] += 1e-12
            step = np.linalg.solve(H, grad)
            # backtracking line search on the objective
            t = 1.0
            decrement = grad @ step
            while True:
                cand = theta - t * step
                fc = self._objective(cand, Xa, yf)
                if fc <= f - 1e-4 * t * decrement or t < 1e-10:
                    break
                t *= 0.5
            theta, f = cand, fc
        self.coef_ = theta[:-1].copy()
        self.intercept_ = float(theta[-1])
        self.n_iter_ = it
        self.converged_ = converged
        self.gradient_norm_ = float(np.max(np.abs(grad)))

    def decision_function(self, X):
        X = self._check_X(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        """p(y = +1 | x) under the fitted model."""
        return _sigmoid(self.decision_function(X))

    def predict(self, X):
        # sigma(z) > 1/2  <=>  z > 0
        return np.where(self.decision_function(X) > 0, 1, -1).astype(np.int8)

    def _state(self):
        return {"coef": self.coef_, "intercept": self.intercept_, "n_iter": self.n_iter_,
                "converged": self.converged_}

    def _load_state(self, state):
        self.coef_ = np.asarray(state["coef"], dtype=float)
        self.intercept_ = float(state["intercept"])
        self.n_iter_ = int(state["n_iter"])
        self.converged_ = bool(state["converged"])
