"""Graphs, vertex distributions, flows and their algebra.

Vertices are the integers ``0..n-1``. A flow is a plain ``dict`` mapping a
directed edge ``(v, w)`` to the nonnegative mass moved from ``v`` to ``w``;
distributions and cost matrices are numpy arrays checked by the helpers
below.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np
from scipy import sparse

from .errors import CostOverflowError, InfeasibleError, ValidationError

DIST_TOL = 1e-9

Flow = dict


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` holds each undirected edge once as a sorted pair ``(u, v)``
    with ``u < v``. Use :meth:`from_edges` to build one from arbitrary
    pair orderings.
    """

    n: int
    edges: frozenset

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ValidationError(f"edge {e!r} is not a sorted pair inside [0, {self.n})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
        return cls(int(n), frozenset(seen))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(int(n), frozenset(combinations(range(n), 2)))

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        u, v = np.nonzero(np.triu(adj, 1))
        return cls(adj.shape[0], frozenset(zip(u.tolist(), v.tolist())))

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def directed_edges(self) -> list:
        """Both orientations of every edge, ordered by (edge, orientation)."""
        out = []
        for u, v in self.sorted_edges():
            out.append((u, v))
            out.append((v, u))
        return out

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            uv = np.array(self.sorted_edges())
            a[uv[:, 0], uv[:, 1]] = True
            a[uv[:, 1], uv[:, 0]] = True
        return a

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def induced(self, vertices) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled ``0..k-1`` in sorted order."""
        vs = sorted(set(int(v) for v in vertices))
        index = {v: i for i, v in enumerate(vs)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(vs), edges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def incidence_matrix(graph: Graph) -> sparse.csr_matrix:
    """Signed incidence matrix, rows = :meth:`Graph.directed_edges`, columns = vertices.

    Row ``(v, w)`` carries ``+1`` at column ``w`` and ``-1`` at column ``v``.
    Returned sparse; the result of a flow is ``rho0 + F.T @ J``.
    """
    de = graph.directed_edges()
    m = len(de)
    rows = np.repeat(np.arange(m), 2)
    cols = np.array([[w, v] for v, w in de], dtype=np.int64).reshape(-1) if m else np.zeros(0, dtype=np.int64)
    vals = np.tile([1.0, -1.0], m)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(m, graph.n))


def check_distribution(rho, n: int | None = None, name: str = "rho") -> np.ndarray:
    """Validate a vertex distribution and return it as a float array."""
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if n is not None and rho.shape[0] != n:
        raise ValidationError(f"{name} has length {rho.shape[0]}, expected {n}")
    if not np.all(np.isfinite(rho)) or np.any(rho < 0):
        raise ValidationError(f"{name} must have finite nonnegative entries")
    if abs(rho.sum() - 1.0) > DIST_TOL:
        raise ValidationError(f"{name} sums to {rho.sum():.12g}, not 1")
    return rho


def support(rho, tol: float = 0.0) -> frozenset:
    rho = np.asarray(rho)
    return frozenset(np.flatnonzero(rho > tol).tolist())


def check_cost_matrix(cost, n: int | None = None) -> np.ndarray:
    """Validate a symmetric nonnegative cost matrix (``inf`` allowed off-diagonal)."""
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValidationError("cost matrix must be square")
    if n is not None and cost.shape[0] != n:
        raise ValidationError(f"cost matrix is {cost.shape[0]}x{cost.shape[0]}, expected {n}x{n}")
    off = ~np.eye(cost.shape[0], dtype=bool)
    vals = cost[off]
    if np.any(np.isnan(vals)):
        raise ValidationError("cost matrix contains NaN")
    if np.any(vals < 0):
        raise ValidationError("cost matrix has negative entries")
    if not np.array_equal(cost[off], cost.T[off]):
        raise ValidationError("cost matrix is not symmetric")
    return cost


def flow_cost(flow: Flow, cost) -> float:
    """Total cost ``sum c(e) J(e)`` over directed edges."""
    cost = np.asarray(cost, dtype=float)
    total = 0.0
    for (v, w), mass in flow.items():
        if mass < 0:
            raise ValidationError(f"negative flow {mass} on ({v}, {w})")
        if mass == 0:
            continue
        c = cost[v, w]
        if not np.isfinite(c):
            raise CostOverflowError(f"flow {mass} on edge ({v}, {w}) with infinite cost")
        total += c * mass
    return float(total)


def flow_result(flow: Flow, rho0, graph: Graph | None = None) -> np.ndarray:
    """Distribution left after applying ``flow`` to ``rho0``.

    Computed by iterating over edges rather than forming the incidence
    matrix. Entries in ``[-1e-9, 0)`` are clamped to zero; anything more
    negative means the flow moves mass that is not there.
    """
    rho = np.array(rho0, dtype=float)
    n = rho.shape[0]
    for (v, w), mass in flow.items():
        if not (0 <= v < n and 0 <= w < n) or v == w:
            raise ValidationError(f"flow edge ({v}, {w}) is not a valid directed edge")
        if graph is not None and not graph.has_edge(v, w):
            raise ValidationError(f"flow edge ({v}, {w}) is not in the graph")
        if mass < 0:
            raise ValidationError(f"negative flow {mass} on ({v}, {w})")
        rho[w] += mass
        rho[v] -= mass
    if np.any(rho < -DIST_TOL):
        v = int(np.argmin(rho))
        raise InfeasibleError(f"flow leaves mass {rho[v]:.3g} at vertex {v}")
    rho[rho < 0] = 0.0
    return rho
