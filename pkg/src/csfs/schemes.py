"""Ensemble topologies built from selection artifacts.

traditional     one multiclass node over the globally relevant features
one-layer-ova   L one-vs-rest nodes, one per class
two-layer-dove  L(L-1)/2 pairwise nodes, averaged per class
three-layer     L diagonal one-vs-rest nodes plus L(L-1)/2 pairwise nodes
                over the off-diagonal cells, averaged per class
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .classifiers import BaseClassifierSpec, TrainedNode, train_node
from .data import NEG, POS, Dataset, binarize, pair_view
from .errors import DataError
from .matrix import RelevanceMatrix
from .selection import (
    ClassSpecificRanking,
    GlobalRanking,
    PairwiseRelevanceTable,
    RelevanceThreshold,
    class_pairs,
    relevant_features,
)

TRADITIONAL = "traditional"
ONE_LAYER = "one-layer-ova"
TWO_LAYER = "two-layer-dove"
THREE_LAYER = "three-layer"
TOPOLOGIES = (TRADITIONAL, ONE_LAYER, TWO_LAYER, THREE_LAYER)

ARTIFACT_FOR = {
    TRADITIONAL: GlobalRanking,
    ONE_LAYER: ClassSpecificRanking,
    TWO_LAYER: PairwiseRelevanceTable,
    THREE_LAYER: RelevanceMatrix,
}

NEUTRAL_SCORE = 0.5


class FallbackWarning(UserWarning):
    """A node had no relevant features and fell back to the top-scoring one."""


@dataclass(frozen=True)
class SchemeSpec:
    topology: str = THREE_LAYER
    threshold: RelevanceThreshold = field(default_factory=RelevanceThreshold)
    base: BaseClassifierSpec = field(default_factory=BaseClassifierSpec)
    empty_node: str = "neutral"
    diag_weight: float = 1.0

    def __post_init__(self):
        if self.topology not in TOPOLOGIES:
            raise DataError(f"unknown topology {self.topology!r}; known: {list(TOPOLOGIES)}")
        if self.empty_node not in ("neutral", "omit"):
            raise DataError(f"empty-node policy must be 'neutral' or 'omit', got {self.empty_node!r}")
        if not self.diag_weight > 0:
            raise DataError("diag_weight must be positive")


@dataclass(frozen=True, eq=False)
class SchemeNode:
    """One discriminative node and its place in the topology.

    ``classes`` is (p,) for one-vs-rest and diagonal nodes, (p, q) for
    pairwise ones and every class for the traditional node.  ``model`` is
    None for a neutral node built from an empty feature set.
    """

    role: str
    classes: tuple[str, ...]
    features: tuple[str, ...]
    model: TrainedNode | None
    fallback: bool = False

    @property
    def neutral(self) -> bool:
        return self.model is None


@dataclass(frozen=True, eq=False)
class TrainedScheme:
    topology: str
    classes: tuple[str, ...]
    features: tuple[str, ...]
    priors: np.ndarray
    nodes: tuple[SchemeNode, ...]
    spec: SchemeSpec

    def nodes_for(self, role: str) -> list[SchemeNode]:
        return [n for n in self.nodes if n.role == role]

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        """Per-class scores, shape (n, L), for full-width feature rows."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.features):
            raise DataError(f"expected {len(self.features)} feature values, got {X.shape[1]}")
        if not np.all(np.isfinite(X)):
            raise DataError("feature values must be finite")
        n, L = len(X), len(self.classes)
        cidx = {c: k for k, c in enumerate(self.classes)}

        def prob(node: SchemeNode, label: str) -> np.ndarray:
            if node.neutral:
                return np.full(n, NEUTRAL_SCORE)
            model = node.model
            return model.predict_proba(X[:, list(model.features)])[:, model.classes.index(label)]

        if self.topology == TRADITIONAL:
            (node,) = self.nodes
            out = np.zeros((n, L))
            for c in self.classes:
                out[:, cidx[c]] = prob(node, c)
            return out

        # weighted average of the inputs wired to each class
        total = np.zeros((n, L))
        weight = np.zeros(L)
        for node in self.nodes:
            if node.role in ("one-vs-rest", "diagonal"):
                (p,) = node.classes
                w = self.spec.diag_weight if node.role == "diagonal" else 1.0
                total[:, cidx[p]] += w * prob(node, POS)
                weight[cidx[p]] += w
            else:
                for c in node.classes:
                    total[:, cidx[c]] += prob(node, c)
                    weight[cidx[c]] += 1.0
        return total / weight

    def decide(self, scores: np.ndarray) -> list[str]:
        """Argmax per row; ties go to the larger training prior, then class order."""
        scores = np.atleast_2d(scores)
        out = []
        for row in scores:
            tied = np.flatnonzero(row == row.max())
            best = max(tied, key=lambda k: (self.priors[k], -k))
            out.append(self.classes[best])
        return out

    def predict_many(self, X: np.ndarray) -> tuple[list[str], np.ndarray]:
        scores = self.predict_scores(X)
        return self.decide(scores), scores

    def to_json(self) -> dict:
        return {
            "format": "csfs-scheme",
            "version": 1,
            "topology": self.topology,
            "classes": list(self.classes),
            "features": list(self.features),
            "priors": self.priors.tolist(),
            "aggregation": {
                "tau": self.spec.threshold.tau,
                "empty_node": self.spec.empty_node,
                "diag_weight": self.spec.diag_weight,
                "neutral_score": NEUTRAL_SCORE,
            },
            "base": self.spec.base.to_json(),
            "nodes": [
                {
                    "role": node.role,
                    "classes": list(node.classes),
                    "features": list(node.features),
                    "neutral": node.neutral,
                    "fallback": node.fallback,
                    "params": None if node.neutral else node.model.to_json(),
                }
                for node in self.nodes
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrainedScheme":
        if obj.get("format") != "csfs-scheme":
            raise DataError("not a scheme manifest")
        try:
            agg, base = obj["aggregation"], obj["base"]
            spec = SchemeSpec(
                topology=obj["topology"],
                threshold=RelevanceThreshold(agg["tau"]),
                base=BaseClassifierSpec(**base),
                empty_node=agg["empty_node"],
                diag_weight=agg["diag_weight"],
            )
            nodes = tuple(
                SchemeNode(
                    role=e["role"],
                    classes=tuple(e["classes"]),
                    features=tuple(e["features"]),
                    model=None if e["params"] is None else TrainedNode.from_json(e["params"]),
                    fallback=bool(e.get("fallback", False)),
                )
                for e in obj["nodes"]
            )
            return cls(
                spec.topology,
                tuple(obj["classes"]),
                tuple(obj["features"]),
                np.array(obj["priors"], dtype=float),
                nodes,
                spec,
            )
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed scheme manifest: {exc}") from None


def _check_artifact(d: Dataset, spec: SchemeSpec, artifact) -> None:
    expected = ARTIFACT_FOR[spec.topology]
    if not isinstance(artifact, expected):
        raise DataError(
            f"topology {spec.topology!r} needs a {expected.__name__}, got {type(artifact).__name__}"
        )
    if artifact.classes and tuple(artifact.classes) != d.classes:
        raise DataError(f"artifact classes {list(artifact.classes)} do not match data classes {list(d.classes)}")
    if tuple(artifact.features) != d.features:
        unknown = [f for f in artifact.features if f not in d.features]
        if unknown or isinstance(artifact, (GlobalRanking, ClassSpecificRanking, PairwiseRelevanceTable)):
            raise DataError("artifact features do not match the dataset's features")


def _with_fallback(chosen: Sequence[str], scores: np.ndarray, features: Sequence[str], who: str):
    if chosen:
        return tuple(chosen), False
    top = features[int(np.argmax(scores))]
    warnings.warn(f"{who}: no feature above threshold, using top-scoring {top!r}", FallbackWarning, stacklevel=3)
    return (top,), True


def build_scheme(d: Dataset, spec: SchemeSpec, artifact) -> TrainedScheme:
    d.require_multiclass()
    _check_artifact(d, spec, artifact)
    th, base = spec.threshold, spec.base
    fidx = {f: j for j, f in enumerate(d.features)}
    everyone = np.arange(d.n)
    nodes: list[SchemeNode] = []

    def fit(role, classes, feats, examples, labels, order, fallback=False):
        model = train_node(d, examples, labels, [fidx[f] for f in feats], base, order)
        nodes.append(SchemeNode(role, classes, tuple(feats), model, fallback))

    def fit_or_empty(role, classes, feats, examples, labels, order):
        if feats:
            fit(role, classes, feats, examples, labels, order)
        elif spec.empty_node == "neutral":
            nodes.append(SchemeNode(role, classes, (), None))

    def ovr_labels(p):
        return binarize(d, p).string_labels()

    if spec.topology == TRADITIONAL:
        feats, fb = _with_fallback(relevant_features(artifact, th), artifact.scores, artifact.features, "traditional node")
        fit("multiclass", d.classes, feats, everyone, d.labels, d.classes, fb)

    elif spec.topology == ONE_LAYER:
        chosen = relevant_features(artifact, th)
        for p in d.classes:
            feats, fb = _with_fallback(chosen[p], artifact.row(p), artifact.features, f"node {p}+rest")
            fit("one-vs-rest", (p,), feats, everyone, ovr_labels(p), (POS, NEG), fb)

    elif spec.topology == TWO_LAYER:
        chosen = relevant_features(artifact, th)
        for p, q in class_pairs(d.classes):
            v = pair_view(d, p, q)
            labels = [d.classes[k] for k in v.labels]
            fit_or_empty("pairwise", (p, q), chosen[(p, q)], v.indices, labels, (p, q))

    else:
        for p in d.classes:
            fit_or_empty("diagonal", (p,), artifact.diagonal[p], everyone, ovr_labels(p), (POS, NEG))
        for p, q in class_pairs(d.classes):
            v = pair_view(d, p, q)
            labels = [d.classes[k] for k in v.labels]
            fit_or_empty("off-diagonal", (p, q), artifact.cell(p, q), v.indices, labels, (p, q))

    for c in d.classes:
        if not any(c in node.classes for node in nodes):
            raise DataError(f"class {c!r} has no non-empty node under the 'omit' policy")
    priors = d.class_counts() / d.n
    return TrainedScheme(spec.topology, d.classes, d.features, priors, tuple(nodes), spec)


def predict(s: TrainedScheme, x: Sequence[float]) -> tuple[str, np.ndarray]:
    """Label and per-class scores for one full-width feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError("expected a single feature vector")
    labels, scores = s.predict_many(x[None, :])
    return labels[0], scores[0]


def count_nodes(s: TrainedScheme) -> int:
    """Discriminative nodes only; aggregation units are not counted."""
    return len(s.nodes)


def expected_node_count(topology: str, L: int) -> int:
    return {TRADITIONAL: 1, ONE_LAYER: L, TWO_LAYER: comb(L, 2), THREE_LAYER: comb(L + 1, 2)}[topology]
