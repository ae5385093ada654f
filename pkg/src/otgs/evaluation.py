"""Downstream classification of summarized datasets and method sweeps.

Summaries are compared by the accuracy of one fixed classifier: logistic
regression on the concatenation of node features and upper-triangular
adjacency bits, trained by full-batch gradient descent and scored with
stratified k-fold cross-validation repeated over several shuffles.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.model_selection import StratifiedKFold

from .compress import ot_compress
from .datasets import LabeledDataset
from .errors import ValidationError
from .graph import Graph
from .params import ParamPair, apply_sensitivity_filter, sensitivity_scores, supervised_params, unsupervised_params

METHODS = ("supervised", "unsupervised-per-graph", "random-subset", "none")
ALIASES = {"unsupervised": "unsupervised-per-graph", "random": "random-subset", "ours": "supervised"}
CSV_COLUMNS = ("method", "kappa", "trial", "fold", "accuracy", "compress_ms", "classify_ms")


def canonical_method(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in METHODS:
        raise ValidationError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return name


def target_size(n: int, kappa: float) -> int:
    if not 0.0 < kappa <= 1.0:
        raise ValidationError(f"compression ratio {kappa} outside (0, 1]")
    return max(1, math.floor(kappa * n + 1e-9))


@dataclass
class SummaryModel:
    """A fitted summarizer. ``support`` is ``None`` for the per-graph method."""

    method: str
    kappa: float
    k: int
    support: tuple | None
    params: ParamPair | None = None
    forced: frozenset = frozenset()


def fit_summarizer(train: LabeledDataset, kappa: float, method: str = "supervised", seed=None,
                   sensitivity_fraction: float | None = None, bins: int | None = None,
                   max_candidates: int | None = None) -> SummaryModel:
    """Learn one vertex subset from ``train`` (or nothing, for the per-graph method).

    ``supervised`` estimates parameters from the whole training set and
    compresses the complete graph on ``n`` vertices. With
    ``sensitivity_fraction`` the most class-sensitive vertices are kept
    unconditionally.
    """
    method = canonical_method(method)
    n = train.n
    k = target_size(n, kappa)
    if method == "none" or k == n:
        return SummaryModel(method, kappa, n, tuple(range(n)))
    if method == "unsupervised-per-graph":
        return SummaryModel(method, kappa, k, None)
    if method == "random-subset":
        if seed is None:
            raise ValidationError("random-subset needs a seed")
        rng = np.random.default_rng(seed)
        return SummaryModel(method, kappa, k, tuple(sorted(rng.choice(n, size=k, replace=False).tolist())))
    params = supervised_params(train, bins=bins)
    forced = frozenset()
    if sensitivity_fraction is not None:
        forced, _ = apply_sensitivity_filter(sensitivity_scores(train, bins=bins), sensitivity_fraction, k)
    res = ot_compress(Graph.complete(n), params.rho0, params.cost, k, forced=forced,
                      max_candidates=max_candidates)
    return SummaryModel(method, kappa, k, res.support, params, forced)


def _compress_one(args):
    adj, feats, k = args
    g = Graph.from_adjacency(adj)
    p = unsupervised_params(g, feats)
    return ot_compress(g, p.rho0, p.cost, k).support


def summarize_testset(model: SummaryModel, test: LabeledDataset, threads: int | None = None) -> LabeledDataset:
    """Apply a fitted summarizer to every test sample."""
    if model.support is not None:
        if model.support and max(model.support) >= test.n:
            raise ValidationError(f"model support does not fit test graphs with n={test.n}")
        return test.induced(model.support)
    jobs = [(test.adjacency[i], test.features[i], model.k) for i in range(test.m)]
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            supports = list(pool.map(_compress_one, jobs))
    else:
        supports = [_compress_one(j) for j in jobs]
    if not supports:
        return LabeledDataset(np.zeros((0, model.k, model.k), bool), np.zeros((0, model.k, test.d)), np.zeros(0))
    idx = np.array(supports)
    rows = np.arange(test.m)[:, None]
    adj = test.adjacency[rows[:, :, None], idx[:, :, None], idx[:, None, :]]
    feats = test.features[rows, idx]
    return LabeledDataset(adj, feats, test.labels)


def graph_feature_matrix(data: LabeledDataset) -> np.ndarray:
    """One row per graph: flattened node features, then upper-triangular adjacency bits."""
    iu = np.triu_indices(data.n, 1)
    return np.hstack([data.features.reshape(data.m, -1), data.adjacency[:, iu[0], iu[1]].astype(float)])


class LogisticRegressionGD:
    """L2-regularized logistic regression fitted by full-batch gradient descent.

    Columns are standardized with training statistics and the rows then
    scaled by ``1/sqrt(n_features)`` so a fixed step size behaves the same
    whatever the summary size.
    """

    def __init__(self, n_iter: int = 500, step: float = 0.1, l2: float = 1e-3):
        self.n_iter = n_iter
        self.step = step
        self.l2 = l2

    def _transform(self, X):
        return (X - self.mean_) / self.scale_

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self.mean_ = X.mean(axis=0)
        sd = X.std(axis=0)
        sd[sd == 0] = 1.0
        self.scale_ = sd * math.sqrt(max(X.shape[1], 1))
        Z = self._transform(X)
        m = Z.shape[0]
        w = np.zeros(Z.shape[1])
        b = 0.0
        for _ in range(self.n_iter):
            p = 1.0 / (1.0 + np.exp(-(Z @ w + b)))
            r = p - y
            w -= self.step * (Z.T @ r / m + self.l2 * w)
            b -= self.step * r.mean()
        self.coef_, self.intercept_ = w, b
        return self

    def decision_function(self, X):
        return self._transform(np.asarray(X, dtype=float)) @ self.coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(np.int64)


@dataclass
class CVResult:
    accuracy: np.ndarray          # (trials, folds)
    classify_ms: np.ndarray       # (trials, folds)

    @property
    def mean(self) -> float:
        return float(self.accuracy.mean())

    @property
    def sd(self) -> float:
        return float(self.accuracy.std())


def _run_fold(X, y, train_idx, test_idx, clf_kwargs):
    t0 = time.perf_counter()
    clf = LogisticRegressionGD(**clf_kwargs).fit(X[train_idx], y[train_idx])
    acc = float(np.mean(clf.predict(X[test_idx]) == y[test_idx]))
    return acc, (time.perf_counter() - t0) * 1e3


def classify_cv(data: LabeledDataset, folds: int = 5, trials: int = 5, seed: int = 0,
                threads: int | None = None, **clf_kwargs) -> CVResult:
    """Cross-validated accuracy, folds reshuffled for every trial."""
    counts = np.bincount(data.labels, minlength=2)
    if counts.min() < folds:
        raise ValidationError(f"each class needs at least {folds} samples, have {counts.tolist()}")
    X = graph_feature_matrix(data)
    y = data.labels
    jobs = []
    for t in range(trials):
        state = int(np.random.SeedSequence([seed, t]).generate_state(1)[0])
        skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=state)
        for tr, te in skf.split(X, y):
            jobs.append((tr, te))
    LogisticRegressionGD(n_iter=1).fit(X[:2], y[:2])  # warm-up, untimed
    run = lambda job: _run_fold(X, y, job[0], job[1], clf_kwargs)  # noqa: E731
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(run, jobs))
    else:
        out = [run(j) for j in jobs]
    acc = np.array([a for a, _ in out]).reshape(trials, folds)
    ms = np.array([t for _, t in out]).reshape(trials, folds)
    return CVResult(acc, ms)


@dataclass
class EvalReport:
    rows: list = field(default_factory=list)
    seed: int = 0

    def summary(self) -> dict:
        """``(method, kappa) -> dict(mean, sd, compress_ms, classify_ms)``."""
        out = {}
        for r in self.rows:
            out.setdefault((r["method"], r["kappa"]), []).append(r)
        return {
            key: {
                "mean": float(np.mean([r["accuracy"] for r in rs])),
                "sd": float(np.std([r["accuracy"] for r in rs])),
                "compress_ms": rs[0]["compress_ms"],
                "classify_ms": float(np.sum([r["classify_ms"] for r in rs])),
            }
            for key, rs in out.items()
        }

    def accuracy(self, method: str, kappa: float) -> float:
        return self.summary()[(canonical_method(method), kappa)]["mean"]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
            w.writeheader()
            for r in self.rows:
                w.writerow(r)

    def format_table(self) -> str:
        s = self.summary()
        kappas = sorted({k for _, k in s})
        methods = [m for m in METHODS if any(mm == m for mm, _ in s)]
        head = "method".ljust(24) + "".join(f"{k:>16g}" for k in kappas)
        lines = [head]
        for m in methods:
            cells = []
            for k in kappas:
                e = s.get((m, k))
                cells.append(f"{e['mean']:.3f}+-{e['sd']:.3f}".rjust(16) if e else "-".rjust(16))
            lines.append(m.ljust(24) + "".join(cells))
        return "\n".join(lines)


def run_experiment(train: LabeledDataset, test: LabeledDataset, kappas, methods, seed: int = 0,
                   folds: int = 5, trials: int = 5, sensitivity_fraction: float | None = None,
                   threads: int | None = None, bins: int | None = None) -> EvalReport:
    """Fit every (method, kappa) on ``train``, summarize ``test``, cross-validate on the result.

    ``compress_ms`` covers fitting plus summarizing the test set; each
    row's ``classify_ms`` is one fold's train-and-predict time.
    """
    report = EvalReport(seed=seed)
    for method in methods:
        method = canonical_method(method)
        for kappa in kappas:
            t0 = time.perf_counter()
            model = fit_summarizer(train, kappa, method, seed=seed,
                                   sensitivity_fraction=sensitivity_fraction if method == "supervised" else None,
                                   bins=bins)
            summarized = summarize_testset(model, test, threads=threads)
            compress_ms = (time.perf_counter() - t0) * 1e3
            cv = classify_cv(summarized, folds=folds, trials=trials, seed=seed, threads=threads)
            for t in range(trials):
                for f in range(folds):
                    report.rows.append({
                        "method": method, "kappa": kappa, "trial": t, "fold": f,
                        "accuracy": float(cv.accuracy[t, f]),
                        "compress_ms": round(compress_ms, 3),
                        "classify_ms": round(float(cv.classify_ms[t, f]), 3),
                    })
    return report
