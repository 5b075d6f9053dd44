"""Seeded synthetic datasets with known relevance structure."""

from __future__ import annotations

import string

import numpy as np

from .data import Dataset


def class_names(L: int) -> list[str]:
    if L <= 26:
        return list(string.ascii_uppercase[:L])
    return [f"c{k + 1}" for k in range(L)]


def _cyclic_labels(n: int, names: list[str]) -> list[str]:
    # round-robin keeps classes balanced and first-occurrence order A, B, C, ...
    return [names[i % len(names)] for i in range(n)]


def planted(
    n: int = 400,
    L: int = 4,
    noise: int = 6,
    shift: float = 4.0,
    spacing: float = 4.0,
    seed: int = 0,
) -> Dataset:
    """One class-A-specific feature, one globally discriminative feature, noise.

    ``a_specific`` is N(0, 1) for every class except A, whose mean is moved
    by ``shift`` standard deviations.  ``global`` has class means
    ``0, spacing, 2*spacing, ...``.  ``noise1..`` are N(0, 1) for every class.
    """
    rng = np.random.default_rng(seed)
    names = class_names(L)
    labels = _cyclic_labels(n, names)
    codes = np.array([names.index(c) for c in labels])
    a_specific = rng.standard_normal(n) + shift * (codes == 0)
    global_ = rng.standard_normal(n) + spacing * codes
    cols = [a_specific, global_] + [rng.standard_normal(n) for _ in range(noise)]
    features = ["a_specific", "global"] + [f"noise{k + 1}" for k in range(noise)]
    return Dataset(
        examples=tuple(f"e{i + 1}" for i in range(n)),
        features=tuple(features),
        values=np.column_stack(cols),
        labels=tuple(labels),
    )


def blobs(
    n: int = 400,
    L: int = 4,
    m: int = 5,
    gap: float = 8.0,
    box: float = 20.0,
    seed: int = 0,
) -> Dataset:
    """Isotropic unit-variance Gaussian blobs.

    Centers are drawn uniformly in ``[0, box]^m`` and redrawn until every
    pair of classes is at least ``gap`` apart along some coordinate.
    """
    rng = np.random.default_rng(seed)
    for _ in range(10_000):
        centers = rng.uniform(0.0, box, size=(L, m))
        sep = np.abs(centers[:, None, :] - centers[None, :, :]).max(axis=2)
        if np.all(sep[np.triu_indices(L, 1)] >= gap):
            break
    else:
        raise ValueError("could not place separated centers; lower gap or raise box")
    names = class_names(L)
    labels = _cyclic_labels(n, names)
    codes = np.array([names.index(c) for c in labels])
    values = centers[codes] + rng.standard_normal((n, m))
    return Dataset(
        examples=tuple(f"e{i + 1}" for i in range(n)),
        features=tuple(f"f{j + 1}" for j in range(m)),
        values=values,
        labels=tuple(labels),
    )


def random_dataset(n: int, m: int, L: int, seed: int = 0, levels: int | None = None) -> Dataset:
    """Unstructured data; every class gets at least one row.

    With ``levels`` the values are small integers, which produces ties.
    """
    rng = np.random.default_rng(seed)
    names = class_names(L)
    codes = np.concatenate([np.arange(L), rng.integers(0, L, size=n - L)])
    rng.shuffle(codes)
    if levels:
        values = rng.integers(0, levels, size=(n, m)).astype(float)
    else:
        values = rng.standard_normal((n, m))
    return Dataset(
        examples=tuple(f"e{i + 1}" for i in range(n)),
        features=tuple(f"f{j + 1}" for j in range(m)),
        values=values,
        labels=tuple(names[k] for k in codes),
        classes=tuple(names),
    )
