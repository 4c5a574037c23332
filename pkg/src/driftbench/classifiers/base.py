from __future__ import annotations

import inspect

import numpy as np

from ..exceptions import DimensionError, EmptyInputError

MODEL_FORMAT = "driftbench.model"
MODEL_FORMAT_VERSION = 1


class Estimator:
    """Shared fit/predict plumbing for the binary (+1/-1) classifiers."""

    kind = ""
    requires_both_classes = True

    def get_params(self) -> dict:
        names = [p for p in inspect.signature(type(self).__init__).parameters if p != "self"]
        return {name: getattr(self, name) for name in names}

    def fit(self, X, y, seed: int = 0):
        X = np.ascontiguousarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyInputError("training data must be a non-empty 2-D array")
        if X.shape[1] == 0:
            raise DimensionError("training data has dimension 0")
        if y.shape != (X.shape[0],):
            raise DimensionError(f"labels have shape {y.shape}, expected ({X.shape[0]},)")
        if not np.all(np.isfinite(X)):
            raise ValueError("training features must be finite")
        if not np.all((y == 1) | (y == -1)):
            raise ValueError("labels must be +1 or -1")
        if self.requires_both_classes and np.unique(y).size < 2:
            raise ValueError(f"{self.kind} needs both classes in the training data")
        self.n_features_in_ = X.shape[1]
        self.n_train_ = X.shape[0]
        self._fit(X, y.astype(np.int8), seed)
        return self

    def _check_X(self, X) -> np.ndarray:
        if not hasattr(self, "n_features_in_"):
            raise RuntimeError(f"{type(self).__name__} is not fitted")
        X = np.ascontiguousarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"model expects {self.n_features_in_} features, got shape {np.shape(X)}"
            )
        return X

    def to_dict(self) -> dict:
        state = {k: _plain(v) for k, v in self._state().items()}
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_FORMAT_VERSION,
            "kind": self.kind,
            "hyperparameters": _plain(self.get_params()),
            "n_features": self.n_features_in_,
            "n_train": self.n_train_,
            "parameters": state,
        }

    @classmethod
    def from_dict(cls, doc: dict):
        obj = cls(**doc["hyperparameters"])
        obj.n_features_in_ = int(doc["n_features"])
        obj.n_train_ = int(doc["n_train"])
        obj._load_state(doc["parameters"])
        return obj


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.generic):
        return v.item()
    return v
