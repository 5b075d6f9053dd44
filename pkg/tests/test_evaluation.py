import numpy as np
import pytest

from csfs.data import Dataset
from csfs.errors import DataError
from csfs.evaluation import Pipeline, evaluate, select, stratified_kfold
from csfs.matrix import RelevanceMatrix
from csfs.schemes import ONE_LAYER, THREE_LAYER, TOPOLOGIES, TWO_LAYER, SchemeSpec
from csfs.synth import blobs, random_dataset


def counts(labels, classes):
    return [sum(1 for c in labels if c == k) for k in classes]


def dataset_with(class_sizes, m=2, seed=0):
    rng = np.random.default_rng(seed)
    labels = [c for c, n_c in class_sizes.items() for _ in range(n_c)]
    rng.shuffle(labels)
    return Dataset(
        tuple(f"e{i}" for i in range(len(labels))),
        tuple(f"f{j}" for j in range(m)),
        rng.standard_normal((len(labels), m)),
        tuple(labels),
    )


class TestStratifiedKFold:
    def test_balanced(self):
        d = dataset_with({"A": 10, "B": 10, "C": 10, "D": 10})
        folds = stratified_kfold(d, 5, seed=1)
        for f in range(5):
            assert counts([d.labels[i] for i in np.flatnonzero(folds == f)], d.classes) == [2, 2, 2, 2]

    def test_deterministic(self):
        d = dataset_with({"A": 13, "B": 9})
        assert stratified_kfold(d, 3, 4).tolist() == stratified_kfold(d, 3, 4).tolist()
        assert stratified_kfold(d, 3, 4).tolist() != stratified_kfold(d, 3, 5).tolist()

    def test_imbalanced(self):
        d = dataset_with({"A": 30, "B": 10, "C": 5, "D": 5})
        folds = stratified_kfold(d, 5, seed=2)
        for f in range(5):
            got = counts([d.labels[i] for i in np.flatnonzero(folds == f)], ("A", "B", "C", "D"))
            assert got == [6, 2, 1, 1]

    def test_within_one(self, rng):
        d = dataset_with({"A": 17, "B": 11, "C": 8}, seed=3)
        folds = stratified_kfold(d, 4, seed=0)
        for c in d.classes:
            per = [sum(1 for i in np.flatnonzero(folds == f) if d.labels[i] == c) for f in range(4)]
            assert max(per) - min(per) <= 1
        sizes = np.bincount(folds)
        assert sizes.max() - sizes.min() <= 1

    def test_small_class(self):
        d = dataset_with({"A": 10, "B": 3})
        with pytest.raises(DataError, match="fewer than k"):
            stratified_kfold(d, 5, 0)


class TestEvaluate:
    @pytest.mark.parametrize("topology", TOPOLOGIES)
    def test_separable_blobs(self, topology):
        d = blobs(n=200, L=4, m=4, gap=12.0, box=40.0, seed=3)
        report = evaluate(d, Pipeline(scheme=SchemeSpec(topology)), k=5, seed=1)
        assert report.accuracy == 1.0
        assert report.confusion.sum(axis=1).tolist() == d.class_counts().tolist()

    def test_shuffled_labels_near_chance(self):
        d = blobs(n=400, L=4, m=5, seed=4)
        rng = np.random.default_rng(99)
        shuffled = Dataset(d.examples, d.features, d.values, tuple(rng.permutation(d.labels)))
        accs = [
            evaluate(shuffled, Pipeline(scheme=SchemeSpec(t)), k=5, seed=3).accuracy for t in TOPOLOGIES
        ]
        for acc in accs:
            assert abs(acc - 0.25) <= 0.1

    def test_label_feature_gives_diagonal_confusion(self):
        labels = list("ABC" * 10)
        values = np.array([["ABC".index(c)] for c in labels], dtype=float)
        d = Dataset(tuple(f"e{i}" for i in range(30)), ("lab",), values, tuple(labels))
        report = evaluate(d, Pipeline(scheme=SchemeSpec(TWO_LAYER)), k=5, seed=0)
        assert np.count_nonzero(report.confusion - np.diag(np.diag(report.confusion))) == 0
        assert report.recall == {"A": 1.0, "B": 1.0, "C": 1.0}

    def test_instrumentation_counts(self):
        d = random_dataset(60, 7, 3, seed=5)
        r = evaluate(d, Pipeline(scheme=SchemeSpec(ONE_LAYER)), k=3, seed=0)
        assert r.instrumentation.calls == [7 * 3] * 3
        r = evaluate(d, Pipeline(scheme=SchemeSpec(THREE_LAYER)), k=3, seed=0)
        assert r.instrumentation.calls == [7 * 3] * 3
        # examples touched: training-fold size per call family
        train_sizes = [int((r.folds != f).sum()) for f in range(3)]
        assert r.instrumentation.examples == [7 * 2 * n for n in train_sizes]

    def test_no_leakage(self):
        d = blobs(n=100, L=3, m=4, seed=6)
        pipeline = Pipeline(scheme=SchemeSpec(TWO_LAYER))
        r = evaluate(d, pipeline, k=5, seed=0)
        full = select(d, pipeline)
        for f, artifact in enumerate(r.artifacts):
            train = d.subset(np.flatnonzero(r.folds != f))
            np.testing.assert_array_equal(artifact.scores, select(train, pipeline).scores)
        assert any(not np.array_equal(a.scores, full.scores) for a in r.artifacts)

    def test_three_layer_artifacts_are_matrices(self):
        d = blobs(n=60, L=3, m=3, seed=7)
        r = evaluate(d, Pipeline(scheme=SchemeSpec(THREE_LAYER)), k=3, seed=0)
        assert all(isinstance(a, RelevanceMatrix) for a in r.artifacts)

    def test_report_json_is_deterministic(self):
        d = blobs(n=80, L=4, m=3, seed=8)
        a = evaluate(d, Pipeline(), k=4, seed=11).to_json()
        b = evaluate(d, Pipeline(), k=4, seed=11).to_json()
        assert a == b
        assert "wall_time_s" not in a["instrumentation"]
        assert a["accuracy"] == np.trace(a["confusion"]) / 80

    def test_ove_strategy(self):
        d = blobs(n=80, L=4, m=3, seed=8)
        r = evaluate(d, Pipeline(strategy="ove", scheme=SchemeSpec(ONE_LAYER)), k=4, seed=0)
        assert r.artifacts[0].strategy == "ove"
        assert r.instrumentation.calls == [3 * 6] * 4

    def test_table(self):
        d = blobs(n=40, L=2, m=2, seed=1)
        text = evaluate(d, Pipeline(), k=2, seed=0).table()
        assert "accuracy" in text and "recall" in text
