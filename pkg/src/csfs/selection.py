"""Global and class-specific feature rankings.

``ova`` scores each feature for class p against all other classes merged;
``dove`` keeps one score per unordered class pair; ``ove`` reduces the
pairwise table to one score per class with an aggregate (mean by default).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .data import Dataset, LabeledView, binarize, pair_view
from .errors import DataError
from .measures import CallCounter, MeasureSpec, measure


@dataclass(frozen=True)
class RelevanceThreshold:
    tau: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.tau < 1.0:
            raise DataError(f"tau must lie in [0, 1), got {self.tau}")

    def relevant(self, score: float) -> bool:
        return score > self.tau


def _fsum_mean(stack: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(col) for col in stack.T]) / stack.shape[0]


AGGREGATES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "mean": _fsum_mean,
    "min": lambda stack: stack.min(axis=0),
    "max": lambda stack: stack.max(axis=0),
}


@dataclass(frozen=True)
class AggregateSpec:
    kind: str = "mean"

    def __post_init__(self):
        if self.kind not in AGGREGATES:
            raise DataError(f"unknown aggregate {self.kind!r}; known: {sorted(AGGREGATES)}")


def _check_scores(scores: np.ndarray, shape: tuple[int, ...], what: str) -> np.ndarray:
    scores = np.array(scores, dtype=float)
    if scores.shape != shape:
        raise DataError(f"{what}: expected scores of shape {shape}, got {scores.shape}")
    if not np.all(np.isfinite(scores)) or scores.min(initial=0.0) < 0 or scores.max(initial=0.0) > 1:
        raise DataError(f"{what}: scores must be finite and within [0, 1]")
    scores.setflags(write=False)
    return scores


@dataclass(frozen=True, eq=False)
class GlobalRanking:
    features: tuple[str, ...]
    scores: np.ndarray
    classes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(
            self, "scores", _check_scores(self.scores, (len(self.features),), "global ranking")
        )

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "features": list(self.features),
            "strategy": "global",
            "scores": self.scores.tolist(),
        }


@dataclass(frozen=True, eq=False)
class ClassSpecificRanking:
    """L x m relevance matrix; row p scores every feature for class p."""

    classes: tuple[str, ...]
    features: tuple[str, ...]
    scores: np.ndarray
    strategy: str = "ova"

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "features", tuple(self.features))
        shape = (len(self.classes), len(self.features))
        object.__setattr__(self, "scores", _check_scores(self.scores, shape, "class-specific ranking"))

    def row(self, p: str) -> np.ndarray:
        return self.scores[self.classes.index(p)]

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "features": list(self.features),
            "strategy": self.strategy,
            "scores": self.scores.tolist(),
        }


def class_pairs(classes: Sequence[str]) -> list[tuple[str, str]]:
    """Unordered pairs in lexicographic class order: AB, AC, ..., CD."""
    return list(combinations(classes, 2))


@dataclass(frozen=True, eq=False)
class PairwiseRelevanceTable:
    """One row of feature scores per unordered class pair."""

    classes: tuple[str, ...]
    features: tuple[str, ...]
    scores: np.ndarray
    strategy: str = "dove"

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        object.__setattr__(self, "features", tuple(self.features))
        if len(self.classes) < 2:
            raise DataError("pairwise table needs at least 2 classes")
        shape = (len(self.pairs), len(self.features))
        object.__setattr__(self, "scores", _check_scores(self.scores, shape, "pairwise table"))

    @property
    def pairs(self) -> list[tuple[str, str]]:
        return class_pairs(self.classes)

    def pair_index(self, p: str, q: str) -> int:
        if p == q:
            raise DataError(f"pair needs two distinct classes, got {p!r} twice")
        try:
            a, b = sorted((self.classes.index(p), self.classes.index(q)))
        except ValueError:
            raise DataError(f"unknown class in pair ({p!r}, {q!r})") from None
        L = len(self.classes)
        # row offset of pair (a, b) with a < b in the combinations order
        return a * L - a * (a + 1) // 2 + (b - a - 1)

    def row(self, p: str, q: str) -> np.ndarray:
        return self.scores[self.pair_index(p, q)]

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "features": list(self.features),
            "strategy": self.strategy,
            "pairs": [list(pq) for pq in self.pairs],
            "scores": self.scores.tolist(),
        }


def _score_grid(
    views: Sequence[LabeledView],
    m: int,
    spec: MeasureSpec,
    counter: CallCounter | None,
    threads: int,
) -> np.ndarray:
    # outer loop over features, inner over views; cells are disjoint per feature
    def column(j: int) -> list[float]:
        return [measure(v, j, spec, counter) for v in views]

    if threads > 1 and m > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cols = list(pool.map(column, range(m)))
    else:
        cols = [column(j) for j in range(m)]
    return np.array(cols, dtype=float).reshape(m, len(views)).T


def rank_global(
    d: Dataset,
    spec: MeasureSpec = MeasureSpec(),
    counter: CallCounter | None = None,
    threads: int = 1,
) -> GlobalRanking:
    """Class-independent ranking: each feature scored against all L labels."""
    d.require_multiclass()
    scores = _score_grid([d.view()], d.m, spec, counter, threads)[0]
    return GlobalRanking(d.features, scores, d.classes)


def ova(
    d: Dataset,
    spec: MeasureSpec = MeasureSpec(),
    counter: CallCounter | None = None,
    threads: int = 1,
) -> ClassSpecificRanking:
    d.require_multiclass()
    views = [binarize(d, p) for p in d.classes]
    return ClassSpecificRanking(d.classes, d.features, _score_grid(views, d.m, spec, counter, threads), "ova")


def dove(
    d: Dataset,
    spec: MeasureSpec = MeasureSpec(),
    counter: CallCounter | None = None,
    threads: int = 1,
) -> PairwiseRelevanceTable:
    """Score every feature on every unordered class pair, each pair once."""
    d.require_multiclass()
    views = [pair_view(d, p, q) for p, q in class_pairs(d.classes)]
    return PairwiseRelevanceTable(d.classes, d.features, _score_grid(views, d.m, spec, counter, threads), "dove")


def aggregate_pairwise(
    t: PairwiseRelevanceTable, spec: AggregateSpec = AggregateSpec()
) -> ClassSpecificRanking:
    reduce = AGGREGATES[spec.kind]
    rows = []
    for p in t.classes:
        stack = np.stack([t.row(p, q) for q in t.classes if q != p])
        rows.append(reduce(stack))
    return ClassSpecificRanking(t.classes, t.features, np.clip(rows, 0.0, 1.0), "ove")


def ove(
    d: Dataset,
    spec: MeasureSpec = MeasureSpec(),
    agg: AggregateSpec = AggregateSpec(),
    counter: CallCounter | None = None,
    threads: int = 1,
) -> ClassSpecificRanking:
    return aggregate_pairwise(dove(d, spec, counter, threads), agg)


def collapse(r: ClassSpecificRanking, agg: AggregateSpec = AggregateSpec()) -> GlobalRanking:
    """Class-independent ranking recovered by aggregating over classes."""
    return GlobalRanking(r.features, np.clip(AGGREGATES[agg.kind](r.scores), 0.0, 1.0), r.classes)


def relevant_features(
    r: ClassSpecificRanking | GlobalRanking | PairwiseRelevanceTable,
    th: RelevanceThreshold = RelevanceThreshold(),
):
    """Features scoring strictly above ``th.tau``, in feature order.

    Returns a tuple for a global ranking, a dict keyed by class for a
    class-specific ranking, and a dict keyed by class pair for a pairwise
    table.
    """

    def pick(scores: np.ndarray) -> tuple[str, ...]:
        return tuple(f for f, s in zip(r.features, scores) if s > th.tau)

    if isinstance(r, GlobalRanking):
        return pick(r.scores)
    if isinstance(r, PairwiseRelevanceTable):
        return {pq: pick(row) for pq, row in zip(r.pairs, r.scores)}
    return {p: pick(row) for p, row in zip(r.classes, r.scores)}


def ranking_from_json(obj: dict):
    """Rebuild a ranking or pairwise table from its JSON form."""
    try:
        strategy = obj["strategy"]
        classes, features, scores = obj["classes"], obj["features"], obj["scores"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"not a ranking document: missing {exc}") from None
    if strategy == "global":
        return GlobalRanking(features, scores, classes)
    if strategy == "dove":
        t = PairwiseRelevanceTable(classes, features, scores)
        if "pairs" in obj and [tuple(pq) for pq in obj["pairs"]] != t.pairs:
            raise DataError("pair rows are not in lexicographic class order")
        return t
    if strategy in ("ova", "ove"):
        return ClassSpecificRanking(classes, features, scores, strategy)
    raise DataError(f"unknown ranking strategy {strategy!r}")
