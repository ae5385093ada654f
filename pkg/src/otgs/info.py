"""Plug-in information estimators (all values in bits).

Continuous features are discretized by equal-width binning over the
empirical range of each dimension, with ``B = max(2, min(64, ceil(N**(1/3))))``
bins unless given. This is an O(N) plug-in estimator; it is not EDGE.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class MiEstimate:
    """A mutual-information estimate in bits.

    ``clamped`` is how far below zero the raw estimate was before clamping;
    ``degenerate`` is set when only one label value was observed.
    """

    value: float
    n_samples: int
    bin_count: int
    clamped: float = 0.0
    degenerate: bool = False

    def __float__(self):
        return self.value


def binary_entropy(x):
    """Base-2 binary entropy ``h(x)`` with ``h(0) = h(1) = 0``."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(np.isnan(arr)):
        raise ValidationError(f"binary entropy argument must lie in [0, 1], got {x!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -arr * np.log2(arr) - (1 - arr) * np.log2(1 - arr)
    h = np.where((arr == 0) | (arr == 1), 0.0, h)
    return float(h) if np.ndim(h) == 0 else h


def entropy_bits(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts > 0]
    if counts.size == 0:
        return 0.0
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def default_bins(n_samples: int) -> int:
    return max(2, min(64, math.ceil(n_samples ** (1.0 / 3.0) - 1e-9)))


def codes(values) -> tuple[np.ndarray, int]:
    """Map discrete values (scalars or rows) to integer codes ``0..K-1``."""
    arr = np.asarray(values)
    if arr.ndim == 1:
        _, inv = np.unique(arr, return_inverse=True)
    else:
        arr = arr.reshape(arr.shape[0], -1)
        _, inv = np.unique(arr, axis=0, return_inverse=True)
    inv = np.asarray(inv).reshape(-1)
    return inv.astype(np.int64), int(inv.max()) + 1 if inv.size else 0


def discretize(x, bins: int | None = None) -> tuple[np.ndarray, int, int]:
    """Equal-width bucket codes for continuous samples.

    Returns ``(codes, n_buckets, bins)``. ``x`` has shape ``(N,)`` or
    ``(N, d)``; a bucket is the tuple of per-dimension bin indices.
    Dimensions with zero range collapse to a single bin.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    x = x.reshape(x.shape[0], -1)
    n = x.shape[0]
    if n < 1:
        raise ValidationError("need at least one sample")
    if bins is None:
        bins = default_bins(n)
    if bins < 1:
        raise ValidationError("bins must be positive")
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    idx = np.zeros(x.shape, dtype=np.int64)
    live = span > 0
    if live.any():
        scaled = (x[:, live] - lo[live]) / span[live] * bins
        idx[:, live] = np.clip(np.floor(scaled).astype(np.int64), 0, bins - 1)
    if idx.shape[1] == 1:
        c, k = codes(idx[:, 0])
    else:
        c, k = codes(idx)
    return c, k, bins


def _mi_from_codes(a: np.ndarray, ka: int, b: np.ndarray, kb: int) -> float:
    joint = np.bincount(a * kb + b, minlength=ka * kb).reshape(ka, kb).astype(float)
    n = joint.sum()
    pa = joint.sum(axis=1) / n
    pb = joint.sum(axis=0) / n
    pj = joint / n
    nz = pj > 0
    return float((pj[nz] * np.log2(pj[nz] / np.outer(pa, pb)[nz])).sum())


def _check_labels(labels, n):
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.shape[0] != n:
        raise ValidationError("labels must be a vector with one entry per sample")
    if n < 2:
        raise ValidationError("need at least two samples")
    return labels


def mi_discrete(x, labels, bin_count: int | None = None) -> MiEstimate:
    """Plug-in mutual information between discrete samples and labels."""
    x = np.asarray(x)
    labels = _check_labels(labels, x.shape[0])
    a, ka = codes(x)
    b, kb = codes(labels)
    if kb < 2:
        warnings.warn("only one label value present; mutual information is 0", RuntimeWarning, stacklevel=2)
        return MiEstimate(0.0, x.shape[0], bin_count or ka, degenerate=True)
    raw = _mi_from_codes(a, ka, b, kb)
    return MiEstimate(max(raw, 0.0), x.shape[0], bin_count or ka, clamped=max(-raw, 0.0))


def mi_continuous(x, labels, bins: int | None = None) -> MiEstimate:
    """Binned mutual information between continuous features and labels."""
    x = np.asarray(x, dtype=float)
    c, _, b = discretize(x, bins)
    est = mi_discrete(c, labels, bin_count=b)
    return est


def conditional_mi(xv, xw, labels, bins: int | None = None) -> MiEstimate:
    """Estimate ``I(X_v; C | X_w)`` as ``I((X_v, X_w); C) - I(X_w; C)``.

    Both terms use the same per-dimension binning, so the plug-in
    difference is nonnegative up to rounding; anything negative is clamped.
    """
    xv = np.asarray(xv, dtype=float)
    xw = np.asarray(xw, dtype=float)
    n = xv.shape[0]
    if xw.shape[0] != n:
        raise ValidationError("feature samples have different lengths")
    labels = _check_labels(labels, n)
    bins = bins or default_bins(n)
    cv, kv, _ = discretize(xv, bins)
    cw, kw, _ = discretize(xw, bins)
    lab, kl = codes(labels)
    if kl < 2:
        warnings.warn("only one label value present; mutual information is 0", RuntimeWarning, stacklevel=2)
        return MiEstimate(0.0, n, bins, degenerate=True)
    joint, kj = codes(cv * kw + cw)
    raw = _mi_from_codes(joint, kj, lab, kl) - _mi_from_codes(cw, kw, lab, kl)
    return MiEstimate(max(raw, 0.0), n, bins, clamped=max(-raw, 0.0))


def kl_bernoulli(p: float, q: float) -> float:
    """Closed-form ``D(Bern(p) || Bern(q))`` in bits; ``inf`` if unsupported."""
    total = 0.0
    for a, b in ((p, q), (1 - p, 1 - q)):
        if a == 0:
            continue
        if b == 0:
            return math.inf
        total += a * math.log2(a / b)
    return max(total, 0.0)


def kl_bernoulli_edge(edge_samples, labels, alpha: float = 1.0) -> float:
    """KL divergence of the edge indicator given ``C=0`` from it given ``C=1``.

    Class-conditional frequencies are Laplace-smoothed with ``alpha``.
    """
    e = np.asarray(edge_samples).astype(bool)
    labels = _check_labels(labels, e.shape[0])
    n0 = int(np.sum(labels == 0))
    n1 = int(np.sum(labels == 1))
    if n0 == 0 or n1 == 0:
        raise ValidationError("both classes must be present to condition on the label")
    p0 = (np.sum(e[labels == 0]) + alpha) / (n0 + 2 * alpha)
    p1 = (np.sum(e[labels == 1]) + alpha) / (n1 + 2 * alpha)
    return kl_bernoulli(float(p0), float(p1))


def kl_bernoulli_matrix(adjacency, labels, alpha: float = 1.0) -> np.ndarray:
    """:func:`kl_bernoulli_edge` for every vertex pair of an ``(m, n, n)`` stack."""
    adj = np.asarray(adjacency, dtype=bool)
    labels = np.asarray(labels)
    n0 = int(np.sum(labels == 0))
    n1 = int(np.sum(labels == 1))
    if n0 == 0 or n1 == 0:
        raise ValidationError("both classes must be present to condition on the label")
    c0 = adj[labels == 0].sum(axis=0, dtype=np.int64)
    c1 = adj[labels == 1].sum(axis=0, dtype=np.int64)
    p0 = (c0 + alpha) / (n0 + 2 * alpha)
    p1 = (c1 + alpha) / (n1 + 2 * alpha)
    out = p0 * np.log2(p0 / p1) + (1 - p0) * np.log2((1 - p0) / (1 - p1))
    out = np.maximum(out, 0.0)
    np.fill_diagonal(out, 0.0)
    return out


def exact_edge_mi(p_class: float, q0: float, q1: float) -> float:
    """Exact ``I(E; C)`` for ``C ~ Bern(p_class)`` and ``E | C=b ~ Bern(q_b)``."""
    for name, v in (("p_class", p_class), ("q0", q0), ("q1", q1)):
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"{name}={v} outside [0, 1]")
    mix = p_class * q1 + (1 - p_class) * q0
    val = binary_entropy(mix) - ((1 - p_class) * binary_entropy(q0) + p_class * binary_entropy(q1))
    return max(float(val), 0.0)
