"""Optimal transport parameters ``(rho0, cost)`` from data.

* :func:`supervised_params` - dataset-level estimates. ``rho0`` is node-feature
  MI with the label, normalized; ``cost(v, w)`` is the edge-indicator KL
  between classes plus the two conditional MI terms of the endpoint features.
* :func:`unsupervised_params` - per-graph baseline: degree-proportional
  ``rho0`` and ``1 + ||x_v - x_w||`` on existing edges.
* :func:`sensitivity_scores` / :func:`apply_sensitivity_filter` - class
  sensitivity of node features and the forced-vertex selection built on it.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset
from .errors import ValidationError
from .graph import Graph
from .info import _mi_from_codes, codes, default_bins, discretize, kl_bernoulli_matrix

MIN_TOTAL_MI = 1e-6


@dataclass
class ParamPair:
    rho0: np.ndarray
    cost: np.ndarray
    provenance: str = "custom"


def _node_codes(data: LabeledDataset, bins: int):
    out = []
    for v in range(data.n):
        c, k, _ = discretize(data.features[:, v, :], bins)
        out.append((c, k))
    return out


def node_mi(data: LabeledDataset, bins: int | None = None) -> np.ndarray:
    """Binned ``I(X_v; C)`` for every node, in bits."""
    bins = bins or default_bins(data.m)
    lab, kl = codes(data.labels)
    return np.array([max(_mi_from_codes(c, k, lab, kl), 0.0) for c, k in _node_codes(data, bins)])


def redundancy_matrix(data: LabeledDataset, bins: int | None = None) -> np.ndarray:
    """``R[v, w] = I(X_v; C | X_w) + I(X_w; C | X_v)`` for all pairs.

    By the chain rule this is ``2 I((X_v, X_w); C) - I(X_v; C) - I(X_w; C)``;
    each conditional term is clamped at zero before summing.
    """
    bins = bins or default_bins(data.m)
    lab, kl = codes(data.labels)
    nc = _node_codes(data, bins)
    single = np.array([_mi_from_codes(c, k, lab, kl) for c, k in nc])
    n = data.n
    R = np.zeros((n, n))
    for v in range(n):
        cv, kv = nc[v]
        for w in range(v + 1, n):
            cw, kw = nc[w]
            if kv == 1 or kw == 1:
                # a constant node adds nothing to the other's information
                joint_mi = single[w] if kv == 1 else single[v]
            else:
                jc, jk = codes(cv * kw + cw)
                joint_mi = _mi_from_codes(jc, jk, lab, kl)
            r = max(joint_mi - single[w], 0.0) + max(joint_mi - single[v], 0.0)
            R[v, w] = R[w, v] = r
    return R


def supervised_params(data: LabeledDataset, bins: int | None = None, alpha: float = 1.0) -> ParamPair:
    """Estimate ``(rho0, cost)`` from a labeled dataset.

    If the node MI values sum to less than ``1e-6`` the initial
    distribution falls back to uniform.
    """
    data.require_both_labels()
    if data.n < 2:
        raise ValidationError("need at least two vertices")
    if data.m < 10:
        warnings.warn(f"only {data.m} training samples; estimates will be noisy", RuntimeWarning, stacklevel=2)
    bins = bins or default_bins(data.m)
    mi = node_mi(data, bins)
    total = mi.sum()
    if total < MIN_TOTAL_MI:
        rho0 = np.full(data.n, 1.0 / data.n)
    else:
        rho0 = mi / total
    cost = kl_bernoulli_matrix(data.adjacency, data.labels, alpha) + redundancy_matrix(data, bins)
    cost = (cost + cost.T) / 2  # exact symmetry despite rounding
    np.fill_diagonal(cost, 0.0)
    return ParamPair(rho0, cost, "supervised")


def unsupervised_params(g: Graph, features) -> ParamPair:
    """Degree-proportional ``rho0`` and ``1 + ||x_v - x_w||_2`` edge costs (``inf`` off-graph)."""
    x = np.asarray(features, dtype=float).reshape(g.n, -1)
    deg = g.degrees().astype(float)
    if g.n == 0 or deg.sum() == 0:
        raise ValidationError("graph has no edges; degree distribution undefined")
    cost = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(cost, 0.0)
    if g.edges:
        uv = np.array(g.sorted_edges())
        c = 1.0 + np.linalg.norm(x[uv[:, 0]] - x[uv[:, 1]], axis=1)
        cost[uv[:, 0], uv[:, 1]] = c
        cost[uv[:, 1], uv[:, 0]] = c
    return ParamPair(deg / deg.sum(), cost, "unsupervised")


def sensitivity_scores(data: LabeledDataset, bins: int | None = None, alpha: float = 1.0) -> np.ndarray:
    """Per-node sample average of ``P(x_v | c) / P(x_v)`` on binned features.

    Bucket frequencies are Laplace-smoothed over the occupied buckets. A
    score of 1 means the feature distribution ignores the class; larger
    is more class-sensitive.
    """
    data.require_both_labels()
    bins = bins or default_bins(data.m)
    lab, kl = codes(data.labels)
    scores = np.empty(data.n)
    for v, (c, k) in enumerate(_node_codes(data, bins)):
        joint = np.bincount(c * kl + lab, minlength=k * kl).reshape(k, kl).astype(float)
        n_c = joint.sum(axis=0)
        cond = (joint + alpha) / (n_c + alpha * k)
        marg = (joint.sum(axis=1) + alpha) / (data.m + alpha * k)
        scores[v] = float(np.mean(cond[c, lab] / marg[c]))
    return scores


def apply_sensitivity_filter(scores, fraction: float, k: int) -> tuple[frozenset, int]:
    """Top ``ceil(fraction * k)`` vertices by score (ties to lower index) and the remaining budget."""
    if not 0.0 < fraction <= 1.0:
        raise ValidationError(f"fraction {fraction} outside (0, 1]")
    scores = np.asarray(scores, dtype=float)
    if not 1 <= k <= scores.size:
        raise ValidationError(f"target size {k} outside [1, {scores.size}]")
    n_forced = min(k, math.ceil(fraction * k - 1e-9))
    order = np.lexsort((np.arange(scores.size), -scores))
    forced = frozenset(order[:n_forced].tolist())
    return forced, k - len(forced)
