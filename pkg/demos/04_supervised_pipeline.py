"""
Learning one summary for a whole dataset
========================================

Estimate transport parameters from labeled training graphs, compress the
complete graph once, then cut every test graph down to the learned vertex
subset and classify it.
"""

import time

import numpy as np

from otgs import SyntheticSpec, gen_synthetic
from otgs.evaluation import classify_cv, fit_summarizer, summarize_testset

data = gen_synthetic(SyntheticSpec(n_nodes=40, n_graphs=400, seed=0))
perm = np.random.default_rng(0).permutation(data.m)
train, test = data.subset(perm[:200]), data.subset(perm[200:])

for method in ("supervised", "random-subset", "unsupervised-per-graph", "none"):
    t0 = time.perf_counter()
    model = fit_summarizer(train, 0.2, method, seed=0)
    small = summarize_testset(model, test)
    ms = (time.perf_counter() - t0) * 1e3
    cv = classify_cv(small, folds=5, trials=2, seed=0)
    print(f"{method:24s} n={small.n:3d}  acc {cv.mean:.3f} +- {cv.sd:.3f}  compress {ms:8.1f} ms")

model = fit_summarizer(train, 0.2, "supervised")
print("learned support:", model.support)
print("top rho0 vertices:", np.argsort(model.params.rho0)[::-1][:8])
