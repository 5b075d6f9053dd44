"""Class-specific relevance matrix built from a pairwise relevance table."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError
from .selection import PairwiseRelevanceTable, RelevanceThreshold, class_pairs


@dataclass(frozen=True)
class RelevanceMatrix:
    """Upper-triangular grid of feature sets.

    ``diagonal[p]`` holds the features relevant for p against every other
    class.  ``offdiag[(p, q)]``, stored only for p before q in class order,
    holds the features relevant for that pair beyond both diagonals.
    """

    classes: tuple[str, ...]
    features: tuple[str, ...]
    tau: float
    diagonal: dict[str, tuple[str, ...]]
    offdiag: dict[tuple[str, str], tuple[str, ...]]

    def _key(self, p: str, q: str) -> tuple[str, str]:
        if p == q:
            raise DataError(f"pair needs two distinct classes, got {p!r} twice")
        for c in (p, q):
            if c not in self.classes:
                raise DataError(f"unknown class {c!r}")
        return (p, q) if self.classes.index(p) < self.classes.index(q) else (q, p)

    def cell(self, p: str, q: str) -> tuple[str, ...]:
        if p == q:
            return self.diagonal[p]
        return self.offdiag[self._key(p, q)]

    def to_json(self) -> dict:
        return {
            "classes": list(self.classes),
            "features": list(self.features),
            "tau": self.tau,
            "diagonal": {p: list(self.diagonal[p]) for p in self.classes},
            "offdiag": [
                {"pair": list(pq), "features": list(self.offdiag[pq])}
                for pq in class_pairs(self.classes)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RelevanceMatrix":
        try:
            classes = tuple(obj["classes"])
            diagonal = {p: tuple(obj["diagonal"][p]) for p in classes}
            offdiag = {tuple(e["pair"]): tuple(e["features"]) for e in obj["offdiag"]}
            tau = float(obj["tau"])
        except (KeyError, TypeError) as exc:
            raise DataError(f"not a relevance matrix document: missing {exc}") from None
        if set(offdiag) != set(class_pairs(classes)):
            raise DataError("off-diagonal cells must cover every pair exactly once, p before q")
        features = tuple(obj.get("features") or _features_in_order(diagonal, offdiag))
        return cls(classes, features, tau, diagonal, offdiag)


def _features_in_order(diagonal, offdiag) -> list[str]:
    seen = dict.fromkeys(f for cell in (*diagonal.values(), *offdiag.values()) for f in cell)
    return list(seen)


def build_matrix(
    t: PairwiseRelevanceTable, th: RelevanceThreshold = RelevanceThreshold()
) -> RelevanceMatrix:
    relevant = {pq: set(j for j, s in enumerate(t.row(*pq)) if s > th.tau) for pq in t.pairs}
    diag_idx = {}
    for p in t.classes:
        sets = [relevant[pq] for pq in t.pairs if p in pq]
        diag_idx[p] = set.intersection(*sets)
    names = lambda idx: tuple(t.features[j] for j in sorted(idx))
    diagonal = {p: names(diag_idx[p]) for p in t.classes}
    offdiag = {
        (p, q): names(relevant[(p, q)] - diag_idx[p] - diag_idx[q]) for p, q in t.pairs
    }
    return RelevanceMatrix(t.classes, t.features, th.tau, diagonal, offdiag)


def pair_relevant_set(mtx: RelevanceMatrix, p: str, q: str) -> tuple[str, ...]:
    """diag(p) | diag(q) | M(p, q), in feature order."""
    extra = mtx.offdiag[mtx._key(p, q)]
    members = set(mtx.diagonal[p]) | set(mtx.diagonal[q]) | set(extra)
    order = {f: k for k, f in enumerate(mtx.features)}
    return tuple(sorted(members, key=lambda f: order.get(f, len(order))))
