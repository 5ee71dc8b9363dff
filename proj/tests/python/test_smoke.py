"""Smoke tests for the lexrel extension module."""

import math

import pytest

lexrel = pytest.importorskip("lexrel")


def test_tokenize():
    assert lexrel.tokenize("If it's white, it's right") == ["if", "it's", "white", "it's", "right"]
    assert lexrel.tokenize("  HELLO!!  ") == ["hello"]
    assert lexrel.tokenize("") == []


def test_ngram_counts_and_top_k():
    counts = lexrel.ngram_counts(["a", "b", "a"])
    assert counts == {"a": 2, "b": 1, "a b": 1, "b a": 1}
    assert lexrel.top_k({"a": 5, "b": 3, "c": 3}, 2) == ["a", "b"]


def test_jaccard_and_jsd():
    assert lexrel.jaccard(["a", "b", "c"], ["b", "c", "d"]) == 0.5
    assert lexrel.jaccard([], []) == 1.0
    assert lexrel.jsd({"x": 1.0}, {"x": 1.0}) == 0.0
    assert abs(lexrel.jsd({"x": 1.0}, {"x": 0.5, "y": 0.5}) - 0.31128) < 1e-4
    with pytest.raises(Exception):
        lexrel.jsd({"x": 0.4}, {"x": 1.0})


def test_overlap_counts():
    oc = lexrel.overlap_counts(["a", "b"], ["b", "c", "d"])
    assert oc == {"shared": 1, "unique_a": 1, "unique_b": 2}


def test_auc_and_evaluate():
    assert lexrel.auc([0.8, 0.4, 0.6, 0.2], [1, 1, 0, 0]) == 0.75
    report = lexrel.evaluate([0.9, 0.2], [1, 0], threshold=0.5, task="hate")
    assert report["precision"] == 1.0
    assert report["recall"] == 1.0
    assert report["n"] == 2
    # Undefined metrics surface as None, not 0.
    no_pos_pred = lexrel.evaluate([0.1, 0.2], [1, 0], threshold=0.5)
    assert no_pos_pred["precision"] is None


def test_class_weights():
    w0, w1 = lexrel.class_weights([0, 0, 0, 1])
    assert math.isclose(w0, 4 / 6)
    assert math.isclose(w1, 2.0)


def test_bootstrap_similarity_deterministic():
    texts_a = [f"alpha beta w{i % 7} gamma" for i in range(40)]
    texts_b = [f"alpha delta w{i % 5} epsilon" for i in range(40)]
    kwargs = dict(metric="jaccard", iterations=20, sample_size=10, top_k=30, seed=3,
                  keep_per_iteration=True)
    r1 = lexrel.bootstrap_similarity(texts_a, texts_b, **kwargs)
    r2 = lexrel.bootstrap_similarity(texts_a, texts_b, **kwargs)
    assert r1["per_iteration"] == r2["per_iteration"]
    assert r1["min"] <= r1["mean"] <= r1["max"]


def test_classifier_train_transfer_roundtrip(tmp_path):
    texts = ["good day today", "bad awful mess"] * 10
    labels = [0, 1] * 10
    clf = lexrel.Classifier.train(texts, labels, hash_bits=10, epochs=30,
                                  learning_rate=0.5, seed=1, stage="sarcasm")
    scores = clf.predict(texts)
    assert all((s >= 0.5) == (y == 1) for s, y in zip(scores, labels))
    assert clf.lineage == ["sarcasm"]

    moved = clf.transfer("hate")
    assert moved.lineage == ["sarcasm", "hate"]
    assert moved.predict(texts[:2]) == clf.predict(texts[:2])

    tuned = lexrel.Classifier.train(texts, labels, epochs=2, seed=2, stage="hate", init=moved)
    assert tuned.lineage == ["sarcasm", "hate"]

    path = str(tmp_path / "model.json")
    tuned.save(path)
    back = lexrel.Classifier.load(path)
    assert back.predict(texts[:3]) == tuned.predict(texts[:3])
    assert back.lineage == tuned.lineage
