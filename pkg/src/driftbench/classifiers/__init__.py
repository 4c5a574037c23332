"""The five classifier families and a config-driven train/predict front end.

>>> cfg = ClassifierConfig.default("KNN")
>>> model = train(cfg, dataset, seed=0)      # doctest: +SKIP
>>> labels = predict(model, points)          # doctest: +SKIP
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from ..labeling import LabeledDataset
from .base import MODEL_FORMAT, MODEL_FORMAT_VERSION, Estimator
from .forest import RandomForest
from .knn import KNeighbors
from .logistic import LogisticRegression
from .naive_bayes import GaussianNB
from .svm import SVMClassifier


class ClassifierKind(str, enum.Enum):
    SVM = "SVM"
    LR = "LR"
    RF = "RF"
    GNB = "GNB"
    KNN = "KNN"

    @classmethod
    def parse(cls, name) -> "ClassifierKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown classifier {name!r}; expected one of {valid}") from None


ESTIMATORS = {
    ClassifierKind.SVM: SVMClassifier,
    ClassifierKind.LR: LogisticRegression,
    ClassifierKind.RF: RandomForest,
    ClassifierKind.GNB: GaussianNB,
    ClassifierKind.KNN: KNeighbors,
}

DEFAULT_HYPERPARAMETERS = {
    ClassifierKind.SVM: {"C": 1.0, "gamma": "scale", "tol": 1e-3, "cache_mb": 256.0},
    ClassifierKind.LR: {"C": 1.0, "tol": 1e-6, "max_iter": 1000},
    ClassifierKind.RF: {"n_estimators": 100, "max_features": "sqrt", "bootstrap": True},
    ClassifierKind.GNB: {"var_smoothing": 1e-9},
    ClassifierKind.KNN: {"k": 5},
}


@dataclass(frozen=True)
class ClassifierConfig:
    kind: ClassifierKind
    hyperparameters: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = ClassifierKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        params = {**DEFAULT_HYPERPARAMETERS[kind], **self.hyperparameters}
        object.__setattr__(self, "hyperparameters", params)
        if "C" in params and not params["C"] > 0:
            raise ValueError("C must be positive")
        if kind is ClassifierKind.KNN and (params["k"] < 1 or params["k"] % 2 == 0):
            raise ValueError("k must be a positive odd integer")
        if kind is ClassifierKind.RF and params["n_estimators"] < 1:
            raise ValueError("the forest needs at least one tree")

    @classmethod
    def default(cls, kind) -> "ClassifierConfig":
        return cls(ClassifierKind.parse(kind))

    def build(self) -> Estimator:
        return ESTIMATORS[self.kind](**self.hyperparameters)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "hyperparameters": dict(self.hyperparameters)}


ALL_KINDS = tuple(ClassifierKind)


def default_configs(kinds=ALL_KINDS) -> list[ClassifierConfig]:
    return [ClassifierConfig.default(k) for k in kinds]


def train(config: ClassifierConfig, data: LabeledDataset, seed: int) -> Estimator:
    """Fit a fresh estimator described by ``config``; deterministic in ``seed``."""
    return config.build().fit(data.points, data.labels, seed=seed)


def predict(model: Estimator, points) -> np.ndarray:
    return model.predict(points)


def model_to_json(model: Estimator) -> str:
    return json.dumps(model.to_dict())


def model_from_json(text: str) -> Estimator:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a serialized driftbench model")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {doc.get('version')}")
    return ESTIMATORS[ClassifierKind.parse(doc["kind"])].from_dict(doc)


__all__ = [
    "ALL_KINDS",
    "ClassifierConfig",
    "ClassifierKind",
    "Estimator",
    "GaussianNB",
    "KNeighbors",
    "LogisticRegression",
    "RandomForest",
    "SVMClassifier",
    "default_configs",
    "model_from_json",
    "model_to_json",
    "predict",
    "train",
]
