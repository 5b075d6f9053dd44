"""Discretization and normalized information-theoretic relevance scores.

All sums go through :func:`math.fsum`, so every quantity is independent of
the order in which symbols or joint cells are visited.  That makes the
scores exactly invariant to label renaming and row permutation, and makes
``symmetric_uncertainty(x, y) == symmetric_uncertainty(y, x)`` bit for bit.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .data import LabeledView
from .errors import DataError

EQUAL_WIDTH = "equal-width"
EQUAL_FREQUENCY = "equal-frequency"
_BINNING_ALIASES = {"ew": EQUAL_WIDTH, "ef": EQUAL_FREQUENCY}


@dataclass(frozen=True)
class DiscretizationSpec:
    method: str = EQUAL_FREQUENCY
    bin_count: int = 5

    def __post_init__(self):
        object.__setattr__(self, "method", _BINNING_ALIASES.get(self.method, self.method))
        if self.method not in (EQUAL_WIDTH, EQUAL_FREQUENCY):
            raise DataError(f"unknown binning method {self.method!r}")
        if int(self.bin_count) != self.bin_count or self.bin_count < 2:
            raise DataError(f"bin_count must be an integer >= 2, got {self.bin_count}")


def discretize(column: Sequence[float], spec: DiscretizationSpec = DiscretizationSpec()) -> np.ndarray:
    """Map reals to bin indices in ``0..bin_count-1``.

    Equal-width splits ``[min, max]`` into equal intervals (max goes to the
    last bin).  Equal-frequency assigns bins from the sort rank,
    ``bin = rank * k // n``; tied values all take the bin of the first rank
    in their run, so equal values never land in different bins.
    """
    x = np.asarray(column, dtype=float)
    k = spec.bin_count
    n = len(x)
    if n == 0:
        return np.zeros(0, dtype=np.intp)
    lo, hi = x.min(), x.max()
    if lo == hi:
        return np.zeros(n, dtype=np.intp)
    if spec.method == EQUAL_WIDTH:
        bins = np.floor((x - lo) / (hi - lo) * k).astype(np.intp)
        return np.minimum(bins, k - 1)
    order = np.argsort(x, kind="stable")
    sorted_x = x[order]
    # first rank of each run of equal values
    starts = np.flatnonzero(np.r_[True, sorted_x[1:] != sorted_x[:-1]])
    run_id = np.cumsum(np.r_[True, sorted_x[1:] != sorted_x[:-1]]) - 1
    first_rank = starts[run_id]
    bins = np.empty(n, dtype=np.intp)
    bins[order] = first_rank * k // n
    return bins


def _codes(x) -> tuple[np.ndarray, int]:
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DataError(f"expected a 1-D vector, got shape {arr.shape}")
    if len(arr) == 0:
        return np.zeros(0, dtype=np.intp), 0
    _, inv = np.unique(arr, return_inverse=True)
    inv = inv.reshape(-1)
    return inv, int(inv.max()) + 1


def _entropy_from_counts(counts: np.ndarray, n: int) -> float:
    counts = counts[counts > 0]
    if len(counts) <= 1:
        return 0.0
    return math.fsum(float(c) / n * math.log2(n / float(c)) for c in counts)


def entropy(x: Sequence) -> float:
    """Shannon entropy in bits of the empirical distribution of ``x``."""
    codes, k = _codes(x)
    if len(codes) == 0:
        raise DataError("entropy of an empty vector")
    return _entropy_from_counts(np.bincount(codes, minlength=k), len(codes))


def _joint(x, y) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    cx, kx = _codes(x)
    cy, ky = _codes(y)
    if len(cx) != len(cy):
        raise DataError(f"length mismatch: {len(cx)} vs {len(cy)}")
    if len(cx) == 0:
        raise DataError("empty input")
    joint = np.bincount(cx * ky + cy, minlength=kx * ky).reshape(kx, ky)
    return joint, joint.sum(axis=1), joint.sum(axis=0), len(cx)


def _mi_from_joint(joint: np.ndarray, nx: np.ndarray, ny: np.ndarray, n: int) -> float:
    terms = []
    for a, b in zip(*np.nonzero(joint)):
        c = int(joint[a, b])
        # integer ratio: exactly 1 (log 0) whenever the cell matches the product
        terms.append(c / n * math.log2((c * n) / (int(nx[a]) * int(ny[b]))))
    return max(0.0, math.fsum(terms))


def mutual_information(x: Sequence, y: Sequence) -> float:
    """Empirical mutual information I(x; y) in bits."""
    joint, nx, ny, n = _joint(x, y)
    return _mi_from_joint(joint, nx, ny, n)


def _su(joint, nx, ny, n) -> float:
    hx = _entropy_from_counts(nx, n)
    hy = _entropy_from_counts(ny, n)
    if hx + hy == 0.0:
        return 0.0
    return min(1.0, 2.0 * _mi_from_joint(joint, nx, ny, n) / (hx + hy))


def _nig(joint, nx, ny, n) -> float:
    # y is the label side
    hy = _entropy_from_counts(ny, n)
    if hy == 0.0:
        return 0.0
    return min(1.0, _mi_from_joint(joint, nx, ny, n) / hy)


def symmetric_uncertainty(x: Sequence, y: Sequence) -> float:
    """2 I(x;y) / (H(x) + H(y)); 0 when both vectors are constant."""
    return _su(*_joint(x, y))


def normalized_information_gain(x: Sequence, labels: Sequence) -> float:
    """I(x; labels) / H(labels); 0 when the labels are constant."""
    return _nig(*_joint(x, labels))


SYMMETRIC_UNCERTAINTY = "symmetric-uncertainty"
NORMALIZED_INFORMATION_GAIN = "normalized-information-gain"

MEASURES: dict[str, Callable] = {
    SYMMETRIC_UNCERTAINTY: _su,
    NORMALIZED_INFORMATION_GAIN: _nig,
}
_MEASURE_ALIASES = {"su": SYMMETRIC_UNCERTAINTY, "nig": NORMALIZED_INFORMATION_GAIN}


@dataclass(frozen=True)
class MeasureSpec:
    """Which score to compute and how to bin the feature first.

    With ``global_bins`` the bin edges come from the whole dataset column
    instead of the examples in the view.
    """

    kind: str = NORMALIZED_INFORMATION_GAIN
    discretization: DiscretizationSpec = field(default_factory=DiscretizationSpec)
    global_bins: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", _MEASURE_ALIASES.get(self.kind, self.kind))
        if self.kind not in MEASURES:
            raise DataError(f"unknown measure {self.kind!r}; known: {sorted(MEASURES)}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "binning": self.discretization.method,
            "bins": self.discretization.bin_count,
            "global_bins": self.global_bins,
        }


class CallCounter:
    """Thread-safe tally of measure invocations and examples scanned."""

    def __init__(self):
        self._lock = threading.Lock()
        self.calls = 0
        self.examples = 0

    def add(self, examples: int) -> None:
        with self._lock:
            self.calls += 1
            self.examples += examples

    def reset(self) -> None:
        with self._lock:
            self.calls = 0
            self.examples = 0


def measure(
    view: LabeledView,
    j: int,
    spec: MeasureSpec = MeasureSpec(),
    counter: CallCounter | None = None,
) -> float:
    """Relevance in [0, 1] of feature ``j`` for the labels of ``view``."""
    if len(view) == 0:
        raise DataError("measure on an empty view")
    if not 0 <= j < view.dataset.m:
        raise DataError(f"feature index {j} out of range")
    if counter is not None:
        counter.add(len(view))
    if spec.global_bins:
        binned = discretize(view.dataset.values[:, j], spec.discretization)[view.indices]
    else:
        binned = discretize(view.column(j), spec.discretization)
    return float(MEASURES[spec.kind](*_joint(binned, view.labels)))
