"""Probabilistic base classifiers used as scheme nodes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Dataset
from .errors import DataError

GNB = "gaussian-naive-bayes"
CENTROID = "nearest-centroid"
_KIND_ALIASES = {"gnb": GNB, "centroid": CENTROID}


@dataclass(frozen=True)
class BaseClassifierSpec:
    kind: str = GNB
    smoothing: float = 1e-9
    temperature: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", _KIND_ALIASES.get(self.kind, self.kind))
        if self.kind not in (GNB, CENTROID):
            raise DataError(f"unknown base classifier {self.kind!r}")
        if not self.smoothing > 0:
            raise DataError("smoothing must be positive")
        if not self.temperature > 0:
            raise DataError("temperature must be positive")

    def to_json(self) -> dict:
        return {"kind": self.kind, "smoothing": self.smoothing, "temperature": self.temperature}


@dataclass(frozen=True, eq=False)
class TrainedNode:
    """A fitted classifier over a fixed feature subset.

    ``centers`` holds per-class means (GNB) or centroids; ``variances`` is
    only set for GNB.
    """

    kind: str
    features: tuple[int, ...]
    classes: tuple[str, ...]
    priors: np.ndarray
    centers: np.ndarray
    variances: np.ndarray | None = None
    temperature: float = 1.0

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Class distributions for rows of ``X`` restricted to ``features``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.features):
            raise DataError(
                f"node expects {len(self.features)} feature values, got {X.shape[1]}"
            )
        diff = X[:, None, :] - self.centers[None, :, :]
        if self.kind == GNB:
            var = self.variances
            logits = np.log(self.priors)[None, :] - 0.5 * np.sum(
                np.log(2 * np.pi * var)[None, :, :] + diff**2 / var[None, :, :], axis=2
            )
        else:
            logits = -np.sqrt(np.sum(diff**2, axis=2)) / self.temperature
        logits -= logits.max(axis=1, keepdims=True)
        p = np.exp(logits)
        return p / p.sum(axis=1, keepdims=True)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "features": list(self.features),
            "classes": list(self.classes),
            "priors": self.priors.tolist(),
            "centers": self.centers.tolist(),
        }
        if self.variances is not None:
            out["variances"] = self.variances.tolist()
        else:
            out["temperature"] = self.temperature
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TrainedNode":
        variances = obj.get("variances")
        return cls(
            kind=obj["kind"],
            features=tuple(obj["features"]),
            classes=tuple(obj["classes"]),
            priors=np.array(obj["priors"], dtype=float),
            centers=np.array(obj["centers"], dtype=float).reshape(len(obj["classes"]), -1),
            variances=None if variances is None else np.array(variances, dtype=float).reshape(len(obj["classes"]), -1),
            temperature=float(obj.get("temperature", 1.0)),
        )


def train_node(
    d: Dataset,
    examples: Sequence[int],
    labels: Sequence[str],
    features: Sequence[int],
    spec: BaseClassifierSpec = BaseClassifierSpec(),
    classes: Sequence[str] | None = None,
) -> TrainedNode:
    """Fit a node on ``examples`` with node-local ``labels``.

    ``classes`` fixes the output order (and the tie-break order); by default
    it is the first-occurrence order of ``labels``.
    """
    examples = np.asarray(examples, dtype=np.intp)
    labels = np.asarray(labels, dtype=object)
    if len(labels) != len(examples):
        raise DataError("labels must align with examples")
    features = tuple(int(j) for j in features)
    if not features:
        raise DataError("a node needs at least one feature")
    classes = tuple(classes) if classes is not None else tuple(dict.fromkeys(labels.tolist()))
    X = d.values[np.ix_(examples, features)]
    centers, variances, priors = [], [], []
    for c in classes:
        rows = X[labels == c]
        if len(rows) == 0:
            raise DataError(f"node class {c!r} has no training examples")
        centers.append(rows.mean(axis=0))
        variances.append(rows.var(axis=0))
        priors.append(len(rows) / len(X))
    centers = np.array(centers)
    if spec.kind == GNB:
        scale = float(X.var(axis=0).max())
        floor = spec.smoothing * scale if scale > 0 else spec.smoothing
        return TrainedNode(GNB, features, classes, np.array(priors), centers, np.maximum(variances, floor))
    return TrainedNode(CENTROID, features, classes, np.array(priors), centers, temperature=spec.temperature)


train_binary_node = train_node


def predict_node_scores(node: TrainedNode, x: Sequence[float]) -> np.ndarray:
    """Distribution over ``node.classes`` for one example.

    ``x`` holds the values of the node's own feature subset only.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError("expected a single feature vector")
    return node.predict_proba(x[None, :])[0]


def node_argmax(node: TrainedNode, scores: np.ndarray) -> str:
    # np.argmax returns the first maximum, i.e. the earliest class
    return node.classes[int(np.argmax(scores))]
