"""Stratified cross-validation of selection + scheme pipelines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import DataError
from .matrix import build_matrix
from .measures import CallCounter, MeasureSpec
from .schemes import ONE_LAYER, THREE_LAYER, TRADITIONAL, TWO_LAYER, SchemeSpec, build_scheme
from .selection import AggregateSpec, dove, ova, ove, rank_global


@dataclass(frozen=True)
class Pipeline:
    """Measure, class-specific strategy and scheme evaluated together.

    ``strategy`` picks ova or ove for the one-layer topology; the other
    topologies fix their own selection step.
    """

    measure: MeasureSpec = field(default_factory=MeasureSpec)
    strategy: str = "ova"
    aggregate: AggregateSpec = field(default_factory=AggregateSpec)
    scheme: SchemeSpec = field(default_factory=SchemeSpec)

    def __post_init__(self):
        if self.strategy not in ("ova", "ove"):
            raise DataError(f"strategy must be 'ova' or 'ove', got {self.strategy!r}")


def select(d: Dataset, pipeline: Pipeline, counter: CallCounter | None = None, threads: int = 1):
    """The selection artifact the pipeline's topology consumes."""
    topo, spec = pipeline.scheme.topology, pipeline.measure
    if topo == TRADITIONAL:
        return rank_global(d, spec, counter, threads)
    if topo == ONE_LAYER:
        if pipeline.strategy == "ova":
            return ova(d, spec, counter, threads)
        return ove(d, spec, pipeline.aggregate, counter, threads)
    table = dove(d, spec, counter, threads)
    if topo == TWO_LAYER:
        return table
    assert topo == THREE_LAYER
    return build_matrix(table, pipeline.scheme.threshold)


def stratified_kfold(d: Dataset, k: int, seed: int) -> np.ndarray:
    """Fold id per example.

    Each class is shuffled and dealt round-robin, continuing from where the
    previous class stopped, so per-class and total fold sizes differ by at
    most one.
    """
    if k < 2:
        raise DataError(f"k must be at least 2, got {k}")
    counts = d.class_counts()
    small = [c for c, n_c in zip(d.classes, counts) if n_c < k]
    if small:
        raise DataError(
            f"classes {small} have fewer than k={k} examples; lower k or drop those classes"
        )
    rng = np.random.default_rng(seed)
    folds = np.empty(d.n, dtype=np.intp)
    offset = 0
    for c in range(d.L):
        members = rng.permutation(np.flatnonzero(d.codes == c))
        folds[members] = (offset + np.arange(len(members))) % k
        offset += len(members)
    return folds


@dataclass
class InstrumentationReport:
    """Observed selection cost: measure calls and examples scanned."""

    calls: list[int]
    examples: list[int]
    wall_time: float

    @property
    def total_calls(self) -> int:
        return sum(self.calls)

    def to_json(self, timing: bool = False) -> dict:
        out = {"measure_calls": self.calls, "examples_touched": self.examples}
        if timing:
            out["wall_time_s"] = self.wall_time
        return out


@dataclass
class EvaluationReport:
    topology: str
    classes: tuple[str, ...]
    k: int
    seed: int
    folds: np.ndarray
    confusion: np.ndarray
    fold_accuracy: list[float]
    instrumentation: InstrumentationReport
    artifacts: list = field(default_factory=list, repr=False)

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.confusion) / self.confusion.sum())

    @property
    def recall(self) -> dict[str, float]:
        rows = self.confusion.sum(axis=1)
        return {
            c: float(self.confusion[i, i] / rows[i]) if rows[i] else 0.0
            for i, c in enumerate(self.classes)
        }

    def to_json(self, timing: bool = False) -> dict:
        return {
            "topology": self.topology,
            "classes": list(self.classes),
            "k": self.k,
            "seed": self.seed,
            "accuracy": self.accuracy,
            "recall": self.recall,
            "confusion": self.confusion.tolist(),
            "fold_accuracy": self.fold_accuracy,
            "folds": self.folds.tolist(),
            "instrumentation": self.instrumentation.to_json(timing),
        }

    def table(self) -> str:
        width = max(8, *(len(c) for c in self.classes))
        lines = [
            f"topology {self.topology}  k={self.k}  seed={self.seed}",
            f"accuracy {self.accuracy:.4f}",
            "",
            "true \\ pred".ljust(width + 2) + "".join(c.rjust(width) for c in self.classes) + "recall".rjust(width),
        ]
        for i, c in enumerate(self.classes):
            row = "".join(str(v).rjust(width) for v in self.confusion[i])
            lines.append(c.ljust(width + 2) + row + f"{self.recall[c]:.3f}".rjust(width))
        lines.append("")
        lines.append(f"measure calls per fold: {self.instrumentation.calls}")
        return "\n".join(lines)


def evaluate(
    d: Dataset,
    pipeline: Pipeline = Pipeline(),
    k: int = 5,
    seed: int = 0,
    threads: int = 1,
) -> EvaluationReport:
    """k-fold stratified CV; selection is refit on every training fold."""
    d.require_multiclass()
    folds = stratified_kfold(d, k, seed)
    confusion = np.zeros((d.L, d.L), dtype=int)
    fold_acc, calls, touched, artifacts = [], [], [], []
    start = time.perf_counter()
    for f in range(k):
        train_idx = np.flatnonzero(folds != f)
        test_idx = np.flatnonzero(folds == f)
        train = d.subset(train_idx)
        missing = [c for c, n_c in zip(d.classes, train.class_counts()) if n_c == 0]
        if missing:
            raise DataError(f"fold {f}: training partition has no examples of {missing}")
        counter = CallCounter()
        artifact = select(train, pipeline, counter, threads)
        scheme = build_scheme(train, pipeline.scheme, artifact)
        predicted, _ = scheme.predict_many(d.values[test_idx])
        hits = 0
        for i, label in zip(test_idx, predicted):
            confusion[d.codes[i], d.class_index(label)] += 1
            hits += d.labels[i] == label
        fold_acc.append(hits / len(test_idx))
        calls.append(counter.calls)
        touched.append(counter.examples)
        artifacts.append(artifact)
    inst = InstrumentationReport(calls, touched, time.perf_counter() - start)
    return EvaluationReport(
        pipeline.scheme.topology, d.classes, k, seed, folds, confusion, fold_acc, inst, artifacts
    )
