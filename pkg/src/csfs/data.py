"""Labeled tabular datasets, class partitions and restricted example views."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .errors import DataError

POS = "POS"
NEG = "NEG"


@dataclass(frozen=True, eq=False)
class Dataset:
    """An n x m real matrix with one class label per row.

    ``classes`` keeps first-occurrence order; every per-class output in the
    package follows it.  ``codes[i]`` is the index of ``labels[i]`` in
    ``classes``.
    """

    examples: tuple[str, ...]
    features: tuple[str, ...]
    values: np.ndarray
    labels: tuple[str, ...]
    classes: tuple[str, ...] = ()
    codes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise DataError(f"values must be 2-D, got shape {values.shape}")
        n, m = values.shape
        if len(self.examples) != n or len(self.labels) != n:
            raise DataError("examples, labels and values disagree on n")
        if len(self.features) != m:
            raise DataError("features and values disagree on m")
        if len(set(self.features)) != m:
            dupes = sorted({f for f in self.features if self.features.count(f) > 1})
            raise DataError(f"duplicate feature names: {dupes}")
        if len(set(self.examples)) != n:
            raise DataError("duplicate example identifiers")
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise DataError(
                f"non-finite value at row {i + 1}, column {self.features[j]!r}"
            )
        labels = tuple(str(c) for c in self.labels)
        classes = tuple(self.classes) or tuple(dict.fromkeys(labels))
        if len(set(classes)) != len(classes):
            raise DataError("duplicate class labels in classes")
        index = {c: k for k, c in enumerate(classes)}
        unknown = set(labels) - index.keys()
        if unknown:
            raise DataError(f"labels not in classes: {sorted(unknown)}")
        codes = np.array([index[c] for c in labels], dtype=np.intp)
        values.setflags(write=False)
        codes.setflags(write=False)
        object.__setattr__(self, "examples", tuple(self.examples))
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "codes", codes)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def L(self) -> int:
        return len(self.classes)

    def row(self, i: int) -> np.ndarray:
        """Feature values of example ``i`` in feature order."""
        return self.values[i]

    def class_index(self, label: str) -> int:
        try:
            return self.classes.index(label)
        except ValueError:
            raise DataError(f"unknown class label {label!r}") from None

    def feature_index(self, name: str) -> int:
        try:
            return self.features.index(name)
        except ValueError:
            raise DataError(f"unknown feature {name!r}") from None

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.codes, minlength=self.L)

    def require_multiclass(self) -> None:
        if self.L < 2:
            raise DataError(f"need at least 2 classes, got {self.L}")

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Rows ``indices`` as a new dataset; the class order is kept."""
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(
            examples=tuple(self.examples[i] for i in idx),
            features=self.features,
            values=self.values[idx],
            labels=tuple(self.labels[i] for i in idx),
            classes=self.classes,
        )

    def view(self) -> "LabeledView":
        """All examples with their original class labels."""
        return LabeledView(self, np.arange(self.n), self.codes)


@dataclass(frozen=True, eq=False)
class LabeledView:
    """Row indices into a dataset plus a label per selected row.

    Views never copy the value matrix.
    """

    dataset: Dataset
    indices: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    def column(self, j: int) -> np.ndarray:
        return self.dataset.values[self.indices, j]


@dataclass(frozen=True, eq=False)
class BinarizedView(LabeledView):
    positive: str = ""

    def string_labels(self) -> list[str]:
        return [POS if v else NEG for v in self.labels]


@dataclass(frozen=True, eq=False)
class PairView(LabeledView):
    pair: tuple[str, str] = ("", "")


@dataclass(frozen=True)
class ClassPartition:
    classes: tuple[str, ...]
    members: tuple[np.ndarray, ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(idx) for idx in self.members)

    def __getitem__(self, label: str) -> np.ndarray:
        return self.members[self.classes.index(label)]


def partition_by_class(d: Dataset) -> ClassPartition:
    members = tuple(np.flatnonzero(d.codes == k) for k in range(d.L))
    return ClassPartition(d.classes, members)


def binarize(d: Dataset, p: str) -> BinarizedView:
    """Class ``p`` against the union of every other class."""
    k = d.class_index(p)
    return BinarizedView(d, np.arange(d.n), d.codes == k, positive=p)


def pair_view(d: Dataset, p: str, q: str) -> PairView:
    """Examples of classes ``p`` and ``q`` only, with their original labels."""
    if p == q:
        raise DataError(f"pair needs two distinct classes, got {p!r} twice")
    kp, kq = d.class_index(p), d.class_index(q)
    idx = np.flatnonzero((d.codes == kp) | (d.codes == kq))
    return PairView(d, idx, d.codes[idx], pair=(p, q))


def _resolve_column(header: list[str], spec: str | int | None, what: str) -> int:
    if spec is None:
        return len(header) - 1
    if isinstance(spec, int) or (isinstance(spec, str) and spec.lstrip("-").isdigit()):
        k = int(spec)
        if not -len(header) <= k < len(header):
            raise DataError(f"{what} column index {k} out of range")
        return k % len(header)
    if spec not in header:
        raise DataError(f"{what} column {spec!r} not found in header")
    return header.index(spec)


def load_csv(
    path: str | Path,
    label_spec: str | int | None = None,
    *,
    id_spec: str | int | None = None,
    impute: str | None = None,
    min_classes: int = 2,
) -> Dataset:
    """Read a headed CSV with numeric features and one label column.

    ``label_spec`` is a column name or index (default: the last column).
    Empty or non-finite cells are errors unless ``impute="mean"``, which
    fills them with the column mean over the parseable rows.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    label_col = _resolve_column(header, label_spec, "label")
    id_col = None if id_spec is None else _resolve_column(header, id_spec, "id")
    if id_col == label_col:
        raise DataError("id column and label column are the same")
    feat_cols = [k for k in range(len(header)) if k not in (label_col, id_col)]
    features = tuple(header[k] for k in feat_cols)

    values = np.empty((len(body), len(feat_cols)))
    missing = np.zeros(values.shape, dtype=bool)
    labels, examples = [], []
    for i, row in enumerate(body):
        lineno = i + 2
        if len(row) != len(header):
            raise DataError(f"{path}: line {lineno} has {len(row)} cells, expected {len(header)}")
        label = row[label_col].strip()
        if not label:
            raise DataError(f"{path}: empty label at line {lineno}")
        labels.append(label)
        examples.append(row[id_col].strip() if id_col is not None else f"e{i + 1}")
        for j, k in enumerate(feat_cols):
            cell = row[k].strip()
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                if impute == "mean" and (not cell or cell.lower() in ("nan", "na")):
                    missing[i, j] = True
                    continue
                raise DataError(
                    f"{path}: line {lineno}, column {header[k]!r}: "
                    f"cannot use {cell!r} as a finite number"
                )
            values[i, j] = v

    if missing.any():
        for j in np.flatnonzero(missing.any(axis=0)):
            ok = ~missing[:, j]
            if not ok.any():
                raise DataError(f"{path}: column {features[j]!r} has no values to impute from")
            values[missing[:, j], j] = values[ok, j].mean()

    d = Dataset(tuple(examples), features, values, tuple(labels))
    if d.L < min_classes:
        raise DataError(f"{path}: need at least {min_classes} distinct classes, found {d.L}")
    return d


def read_feature_rows(
    path: str | Path, features: Sequence[str], *, id_spec: str | int | None = None
) -> tuple[list[str], np.ndarray]:
    """Read only the named feature columns, in the given order.

    Used at prediction time, where the label column may be absent.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    missing = [f for f in features if f not in header]
    if missing:
        raise DataError(f"{path}: missing feature columns {missing}")
    cols = [header.index(f) for f in features]
    id_col = None if id_spec is None else _resolve_column(header, id_spec, "id")
    body = [r for r in rows[1:] if any(cell.strip() for cell in r)]
    ids, out = [], np.empty((len(body), len(cols)))
    for i, row in enumerate(body):
        ids.append(row[id_col].strip() if id_col is not None else f"e{i + 1}")
        for j, k in enumerate(cols):
            try:
                v = float(row[k])
            except (ValueError, IndexError):
                v = math.nan
            if not math.isfinite(v):
                raise DataError(f"{path}: line {i + 2}, column {header[k]!r}: not a finite number")
            out[i, j] = v
    return ids, out


def write_csv(d: Dataset, fh: TextIO, label_name: str = "class") -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([*d.features, label_name])
    for i in range(d.n):
        w.writerow([*(repr(float(v)) for v in d.values[i]), d.labels[i]])
