import csv

import numpy as np
import pytest

from otgs.constructions import make_monotonicity_gadget, sample_dataset
from otgs.datasets import LabeledDataset, SyntheticSpec, gen_synthetic
from otgs.errors import ValidationError
from otgs.evaluation import (
    CSV_COLUMNS, LogisticRegressionGD, canonical_method, classify_cv, fit_summarizer, graph_feature_matrix,
    run_experiment, summarize_testset, target_size,
)


@pytest.fixture(scope="module")
def small_synth():
    return gen_synthetic(SyntheticSpec(n_nodes=12, n_graphs=80, seed=2))


def test_target_size_and_methods():
    assert target_size(100, 0.4) == 40
    assert target_size(10, 0.2) == 2
    assert target_size(3, 0.1) == 1
    assert target_size(10, 0.3) == 3
    with pytest.raises(ValidationError):
        target_size(10, 0.0)
    assert canonical_method("random") == "random-subset"
    with pytest.raises(ValidationError):
        canonical_method("kernel")


@pytest.mark.parametrize("method", ["supervised", "unsupervised-per-graph", "random-subset", "none"])
def test_kappa_one_is_identity(small_synth, method):
    model = fit_summarizer(small_synth, 1.0, method, seed=0)
    assert model.support == tuple(range(12))
    assert summarize_testset(model, small_synth) == small_synth


def test_supervised_support_size(small_synth):
    model = fit_summarizer(small_synth, 0.4, "supervised")
    assert len(model.support) == 4 and model.params is not None
    forced = fit_summarizer(small_synth, 0.4, "supervised", sensitivity_fraction=0.5)
    assert len(forced.forced) == 2 and forced.forced <= set(forced.support)


def test_random_subset_seeded(small_synth):
    a = fit_summarizer(small_synth, 0.5, "random", seed=3)
    assert a.support == fit_summarizer(small_synth, 0.5, "random", seed=3).support
    with pytest.raises(ValidationError):
        fit_summarizer(small_synth, 0.5, "random")


def test_gadget_supervised_support():
    data = sample_dataset(make_monotonicity_gadget(10, 0.4), 20000, seed=0)
    model = fit_summarizer(data, 0.2, "supervised")
    assert len(model.support) == 2
    off = model.params.cost[np.triu_indices(10, 1)]
    assert model.params.cost[0, 1] == off.max()


def test_summarize_examples():
    adj = np.zeros((1, 6, 6), bool)
    adj[0, 2, 5] = adj[0, 5, 2] = True
    data = LabeledDataset(adj, np.arange(6.0).reshape(1, 6, 1), [1])
    for support, edges in (((0,), 0), ((2, 5), 1)):
        model = fit_summarizer(data, 1.0, "none")
        model.support = support
        out = summarize_testset(model, data)
        assert out.n == len(support) and out.adjacency.sum() // 2 == edges
        assert np.array_equal(out.features[0, :, 0], np.array(support, float))


def test_summarize_commutes_with_concat(small_synth):
    a, b = small_synth.subset(np.arange(40)), small_synth.subset(np.arange(40, 80))
    for method in ("supervised", "unsupervised-per-graph"):
        model = fit_summarizer(small_synth, 0.5, method, seed=0)
        whole = summarize_testset(model, small_synth, threads=2)
        parts = LabeledDataset.concat([summarize_testset(model, a), summarize_testset(model, b)])
        assert whole == parts


def test_per_graph_supports_vary(small_synth):
    model = fit_summarizer(small_synth, 0.25, "unsupervised")
    assert model.support is None
    out = summarize_testset(model, small_synth)
    assert out.n == 3 and out.m == small_synth.m


def test_logistic_regression_separable():
    X = np.array([[0.0], [0.1], [0.9], [1.0]] * 10)
    y = np.array([0, 0, 1, 1] * 10)
    assert np.all(LogisticRegressionGD().fit(X, y).predict(X) == y)


def test_classify_cv_examples(rng):
    m, n = 200, 4
    labels = np.arange(m) % 2
    noise = LabeledDataset(np.zeros((m, n, n), bool), rng.normal(size=(m, n, 1)), labels)
    r = classify_cv(noise, seed=1)
    assert r.accuracy.shape == (5, 5) and abs(r.mean - 0.5) <= 0.1
    sep = LabeledDataset(np.zeros((m, n, n), bool), np.repeat(labels[:, None, None], n, axis=1).astype(float), labels)
    assert classify_cv(sep, seed=1).mean >= 0.99
    assert classify_cv(noise, seed=1).accuracy.tolist() == r.accuracy.tolist()
    assert classify_cv(noise, seed=1, threads=3).accuracy.tolist() == r.accuracy.tolist()
    with pytest.raises(ValidationError):
        classify_cv(noise.subset(np.arange(6)))


def test_feature_matrix_layout():
    adj = np.zeros((1, 3, 3), bool)
    adj[0, 0, 2] = adj[0, 2, 0] = True
    data = LabeledDataset(adj, np.array([[[1.0], [2.0], [3.0]]]), [0])
    assert graph_feature_matrix(data).tolist() == [[1, 2, 3, 0, 1, 0]]


def test_run_experiment_and_csv(small_synth, tmp_path):
    rep = run_experiment(small_synth, small_synth, [0.5, 1.0], ["supervised", "none"], seed=0, folds=2, trials=2)
    assert len(rep.rows) == 2 * 2 * 2 * 2
    s = rep.summary()
    assert set(s) == {("supervised", 0.5), ("supervised", 1.0), ("none", 0.5), ("none", 1.0)}
    assert all(0 <= v["mean"] <= 1 and v["sd"] >= 0 for v in s.values())
    baseline = classify_cv(small_synth, folds=2, trials=2, seed=0)
    assert rep.accuracy("none", 1.0) == pytest.approx(baseline.mean)
    rep.write_csv(tmp_path / "r.csv")
    with open(tmp_path / "r.csv") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 17
    assert "supervised" in rep.format_table()
