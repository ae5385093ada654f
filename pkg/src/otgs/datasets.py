"""Labeled graph datasets: container, generators and NDJSON files.

A :class:`LabeledDataset` stores ``m`` graphs on a common vertex set as
dense arrays: a boolean adjacency stack ``(m, n, n)``, node features
``(m, n, d)`` and labels ``(m,)``.

File format (``.ndjson``), one JSON object per line::

    {"format": "otgs-v1", "n": 4, "d": 1}
    {"n": 4, "label": 0, "edges": [[0, 1], [2, 3]], "features": [[0.5], [1], [2], [3]]}

The header line is optional when reading. Edges are written sorted with
``u < v``; features use 17 significant digits so reading back is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetFormatError, ValidationError
from .graph import Graph

FORMAT = "otgs-v1"


@dataclass(frozen=True)
class Sample:
    graph: Graph
    features: np.ndarray
    label: int


class LabeledDataset:
    """Graphs sharing vertices ``0..n-1``, with node features and binary labels."""

    def __init__(self, adjacency, features, labels):
        adjacency = np.asarray(adjacency, dtype=bool)
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=np.int64)
        if adjacency.ndim != 3 or adjacency.shape[1] != adjacency.shape[2]:
            raise ValidationError("adjacency must have shape (m, n, n)")
        m, n, _ = adjacency.shape
        if features.ndim == 2:
            features = features[:, :, None]
        if features.ndim != 3 or features.shape[:2] != (m, n):
            raise ValidationError(f"features must have shape ({m}, {n}, d)")
        if labels.shape != (m,):
            raise ValidationError(f"labels must have shape ({m},)")
        if np.any((labels != 0) & (labels != 1)):
            raise ValidationError("labels must be 0 or 1")
        if not np.array_equal(adjacency, adjacency.transpose(0, 2, 1)):
            raise ValidationError("adjacency matrices must be symmetric")
        if n and np.any(adjacency[:, np.arange(n), np.arange(n)]):
            raise ValidationError("self-loops are not allowed")
        self.adjacency = adjacency
        self.features = features
        self.labels = labels

    @classmethod
    def from_samples(cls, samples, n: int | None = None, d: int | None = None) -> "LabeledDataset":
        samples = list(samples)
        if not samples:
            if n is None or d is None:
                raise ValidationError("empty dataset needs explicit n and d")
            return cls(np.zeros((0, n, n), bool), np.zeros((0, n, d)), np.zeros(0, np.int64))
        adj = np.stack([g.adjacency() for g, _, _ in samples])
        feats = np.stack([np.asarray(x, dtype=float).reshape(g.n, -1) for g, x, _ in samples])
        labels = np.array([int(c) for _, _, c in samples])
        return cls(adj, feats, labels)

    @property
    def m(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n(self) -> int:
        return self.adjacency.shape[1]

    @property
    def d(self) -> int:
        return self.features.shape[2]

    def __len__(self):
        return self.m

    def __getitem__(self, i) -> Sample:
        return Sample(Graph.from_adjacency(self.adjacency[i]), self.features[i], int(self.labels[i]))

    def __iter__(self):
        for i in range(self.m):
            yield self[i]

    def __eq__(self, other):
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.adjacency.shape == other.adjacency.shape
            and self.features.shape == other.features.shape
            and np.array_equal(self.adjacency, other.adjacency)
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self):
        return f"LabeledDataset(m={self.m}, n={self.n}, d={self.d})"

    def subset(self, index) -> "LabeledDataset":
        index = np.asarray(index)
        return LabeledDataset(self.adjacency[index], self.features[index], self.labels[index])

    def induced(self, vertices) -> "LabeledDataset":
        """Every sample restricted to the same vertex subset (sorted, relabelled)."""
        vs = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        if vs.size and (vs[0] < 0 or vs[-1] >= self.n):
            raise ValidationError(f"vertex set is not inside [0, {self.n})")
        return LabeledDataset(self.adjacency[:, vs][:, :, vs], self.features[:, vs], self.labels)

    def edge_samples(self, v: int, w: int) -> np.ndarray:
        return self.adjacency[:, v, w]

    def require_both_labels(self):
        if self.m == 0 or np.unique(self.labels).size < 2:
            raise ValidationError("dataset must contain both class labels")

    @staticmethod
    def concat(parts) -> "LabeledDataset":
        parts = list(parts)
        return LabeledDataset(
            np.concatenate([p.adjacency for p in parts]),
            np.concatenate([p.features for p in parts]),
            np.concatenate([p.labels for p in parts]),
        )


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of the class-conditional synthetic benchmark.

    Node ``j`` (1-based) has feature ``Normal(mu, mu)`` with
    ``mu = j / n * class_scale``; each vertex pair is an edge with the
    probability of the graph's class.
    """

    n_nodes: int = 100
    n_graphs: int = 1500
    class0_scale: float = 5.0
    class1_scale: float = 4.0
    edge_prob_class0: float = 0.5
    edge_prob_class1: float = 0.9
    seed: int = 0

    def validate(self):
        if self.n_nodes < 1 or self.n_graphs < 0:
            raise ValidationError("need n_nodes >= 1 and n_graphs >= 0")
        for p in (self.edge_prob_class0, self.edge_prob_class1):
            if not 0.0 < p < 1.0:
                raise ValidationError(f"edge probability {p} outside (0, 1)")
        if self.class0_scale <= 0 or self.class1_scale <= 0:
            raise ValidationError("class scales must be positive")


def gen_synthetic(spec: SyntheticSpec) -> LabeledDataset:
    """Draw the synthetic dataset; graph ``i`` has label ``i % 2``.

    Each graph uses its own random stream derived from ``(seed, i)``, so
    any graph can be regenerated on its own and order of generation does
    not matter.
    """
    spec.validate()
    n, m = spec.n_nodes, spec.n_graphs
    j = np.arange(1, n + 1) / n
    mus = (j * spec.class0_scale, j * spec.class1_scale)
    probs = (spec.edge_prob_class0, spec.edge_prob_class1)
    iu = np.triu_indices(n, 1)
    adj = np.zeros((m, n, n), dtype=bool)
    feats = np.empty((m, n, 1))
    labels = np.arange(m) % 2
    for i in range(m):
        rng = np.random.default_rng([spec.seed, i])
        c = labels[i]
        feats[i, :, 0] = rng.normal(mus[c], mus[c])
        upper = rng.random(iu[0].size) < probs[c]
        adj[i][iu] = upper
    adj |= adj.transpose(0, 2, 1)
    return LabeledDataset(adj, feats, labels)


def grid_graph_from_image(pixels) -> tuple[Graph, np.ndarray]:
    """4-neighbour grid graph with one node per pixel (row-major), feature = intensity."""
    px = np.asarray(pixels, dtype=float)
    if px.ndim != 2 or px.size == 0:
        raise ValidationError("image must be a non-empty 2-D intensity matrix")
    h, w = px.shape
    idx = np.arange(h * w).reshape(h, w)
    right = np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1)
    down = np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1)
    g = Graph.from_edges(h * w, np.concatenate([right, down]).tolist())
    return g, px.reshape(-1, 1).copy()


def image_dataset(images, labels) -> LabeledDataset:
    """Stack grid graphs for a batch of same-sized images."""
    samples = []
    for img, c in zip(images, labels):
        g, x = grid_graph_from_image(img)
        samples.append((g, x, int(c)))
    return LabeledDataset.from_samples(samples)


def _record_line(adj: np.ndarray, feats: np.ndarray, label: int) -> str:
    n = adj.shape[0]
    u, v = np.nonzero(np.triu(adj, 1))
    edges = ",".join(f"[{a},{b}]" for a, b in zip(u.tolist(), v.tolist()))
    rows = ",".join("[" + ",".join(format(float(x), ".17g") for x in row) + "]" for row in feats)
    return f'{{"n":{n},"label":{int(label)},"edges":[{edges}],"features":[{rows}]}}'


def write_dataset(data: LabeledDataset, path) -> None:
    """Write ``data`` as NDJSON with a header line."""
    if not np.all(np.isfinite(data.features)):
        raise ValidationError("features must be finite to serialize")
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"format": FORMAT, "n": data.n, "d": data.d}, separators=(",", ":")) + "\n")
        for i in range(data.m):
            fh.write(_record_line(data.adjacency[i], data.features[i], data.labels[i]) + "\n")


def read_dataset(path) -> LabeledDataset:
    """Read an NDJSON dataset, reporting the line of the first malformed record."""
    path = Path(path)
    n = d = None
    adjs, feats, labels = [], [], []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"invalid JSON ({exc.msg})", lineno) from None
            if not isinstance(rec, dict):
                raise DatasetFormatError("record is not an object", lineno)
            if "format" in rec:
                if rec["format"] != FORMAT:
                    raise DatasetFormatError(f"unknown format {rec['format']!r}", lineno)
                if lineno != 1 and adjs:
                    raise DatasetFormatError("header after records", lineno)
                n, d = rec.get("n"), rec.get("d")
                continue
            try:
                rn = rec["n"]
                label = rec["label"]
                edges = rec["edges"]
                fx = np.array(rec["features"], dtype=float)
            except (KeyError, TypeError, ValueError) as exc:
                raise DatasetFormatError(f"bad record field: {exc}", lineno) from None
            if n is None:
                n = rn
            if rn != n:
                raise DatasetFormatError(f"record has n={rn}, expected {n}", lineno)
            if fx.ndim != 2 or fx.shape[0] != n:
                raise DatasetFormatError(f"features must be an {n} x d array", lineno)
            if d is None:
                d = fx.shape[1]
            if fx.shape[1] != d:
                raise DatasetFormatError(f"features have d={fx.shape[1]}, expected {d}", lineno)
            if label not in (0, 1):
                raise DatasetFormatError(f"label {label!r} is not 0 or 1", lineno)
            a = np.zeros((n, n), dtype=bool)
            for e in edges:
                if not (isinstance(e, list) and len(e) == 2):
                    raise DatasetFormatError(f"bad edge {e!r}", lineno)
                u, v = e
                if not (isinstance(u, int) and isinstance(v, int) and 0 <= u < n and 0 <= v < n and u != v):
                    raise DatasetFormatError(f"bad edge {e!r}", lineno)
                a[u, v] = a[v, u] = True
            adjs.append(a)
            feats.append(fx)
            labels.append(label)
    if n is None or d is None:
        raise DatasetFormatError("file has neither header nor records")
    if not adjs:
        return LabeledDataset(np.zeros((0, n, n), bool), np.zeros((0, n, d)), np.zeros(0, np.int64))
    return LabeledDataset(np.stack(adjs), np.stack(feats), np.array(labels))
