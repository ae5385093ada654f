"""Support-constrained compression: pick ``k`` vertices to keep.

:func:`ot_compress` shrinks the support greedily, removing at each step the
vertex whose removal leaves the cheapest constrained transport.
:func:`exhaustive_compress` enumerates every size-``k`` support and is the
reference the greedy routine is tested against.

Candidate costs are evaluated through all-pairs shortest paths: with no
capacities, the cheapest flow onto a support ``S`` sends each vertex's mass
to its nearest member of ``S``, so ``cost(S) = sum_u rho0(u) * d(u, S)``.
The final support is re-solved with :func:`~otgs.flow.constrained_transport`
to produce the flow and target distribution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .errors import InfeasibleError, InstanceTooLargeError, ValidationError
from .flow import constrained_transport, shortest_path_lengths
from .graph import Graph, check_cost_matrix, check_distribution

_TIE = 1e-12


@dataclass
class CompressionResult:
    support: tuple
    rho1: np.ndarray
    cost: float
    trace: list = field(default_factory=list)


def _support_cost(dist: np.ndarray, rho0: np.ndarray, S) -> float:
    near = dist[:, list(S)].min(axis=1)
    mask = rho0 > 0
    if np.any(~np.isfinite(near[mask])):
        return np.inf
    return float(rho0[mask] @ near[mask])


def _check_k(k, n):
    if int(k) != k or not 1 <= k <= n:
        raise ValidationError(f"target size k={k!r} must be an integer in [1, {n}]")
    return int(k)


def ot_compress(graph: Graph, rho0, cost, k: int, forced=(), max_candidates: int | None = None,
                dist: np.ndarray | None = None) -> CompressionResult:
    """Greedy vertex elimination down to ``k`` vertices.

    Starting from every vertex, each step tries removing every remaining
    vertex (except those in ``forced``), and removes the one giving the
    smallest constrained transport cost; ties go to the lowest index.

    Parameters
    ----------
    graph : Graph
        Graph the flow lives on. Algorithm-1 style use passes the complete graph.
    rho0 : array-like
        Initial distribution.
    cost : array-like
        Symmetric edge cost matrix.
    k : int
        Number of vertices to keep.
    forced : iterable of int, optional
        Vertices that are never removed.
    max_candidates : int, optional
        If set, each step only tries the ``max_candidates`` removable
        vertices with the least ``rho0`` mass. This is an approximation.
    dist : ndarray, optional
        Precomputed all-pairs shortest path lengths for ``(graph, cost)``.
    """
    n = graph.n
    rho0 = check_distribution(rho0, n, "rho0")
    cost = check_cost_matrix(cost, n)
    k = _check_k(k, n)
    forced = frozenset(int(v) for v in forced)
    if len(forced) > k:
        raise ValidationError(f"{len(forced)} forced vertices exceed the target size {k}")
    if any(not 0 <= v < n for v in forced):
        raise ValidationError("forced vertex outside the graph")
    if dist is None:
        dist = shortest_path_lengths(graph, cost)

    in_s = np.ones(n, dtype=bool)
    mass = rho0 > 0
    by_mass = np.lexsort((np.arange(n), rho0))
    trace = []
    for step in range(n - k):
        cols = np.flatnonzero(in_s)
        sub = dist[:, cols]
        # nearest and second-nearest support distance for every vertex
        if cols.size > 1:
            part = np.partition(sub, 1, axis=1)
            d1, d2 = part[:, 0], part[:, 1]
        else:
            d1 = sub[:, 0]
            d2 = np.full(n, np.inf)
        arg = cols[np.argmin(sub, axis=1)]
        base = float(rho0[mass] @ d1[mass])
        # extra cost of removing v: vertices whose nearest is v fall back to d2
        extra = np.zeros(n)
        with np.errstate(invalid="ignore"):
            gap = np.where(mass, rho0 * (d2 - d1), 0.0)
        gap = np.where(np.isnan(gap), 0.0, gap)
        np.add.at(extra, arg[mass], gap[mass])
        removable = in_s.copy()
        if forced:
            removable[list(forced)] = False
        if max_candidates is not None:
            order = [v for v in by_mass if removable[v]]
            keep = set(order[: max_candidates])
            removable[:] = False
            removable[list(keep)] = True
        cand = np.flatnonzero(removable)
        costs = base + extra[cand]
        finite = np.isfinite(costs)
        if not finite.any():
            raise InfeasibleError(f"step {step + 1}: every removal disconnects mass from the support")
        best = costs[finite].min()
        pick = int(cand[finite & (costs <= best + _TIE * max(1.0, abs(best)))][0])
        in_s[pick] = False
        trace.append((pick, float(costs[cand == pick][0])))

    S = tuple(np.flatnonzero(in_s).tolist())
    sol = constrained_transport(graph, cost, rho0, S)
    return CompressionResult(S, sol.result, sol.cost, trace)


def exhaustive_compress(graph: Graph, rho0, cost, k: int, limit: int = 10**6) -> CompressionResult:
    """Globally optimal size-``k`` support by enumeration (test oracle)."""
    n = graph.n
    rho0 = check_distribution(rho0, n, "rho0")
    cost = check_cost_matrix(cost, n)
    k = _check_k(k, n)
    if comb(n, k) > limit:
        raise InstanceTooLargeError(f"C({n}, {k}) = {comb(n, k)} supports exceeds the limit {limit}")
    dist = shortest_path_lengths(graph, cost)
    best, best_s = np.inf, None
    for S in combinations(range(n), k):
        c = _support_cost(dist, rho0, S)
        if c < best - _TIE * max(1.0, abs(c)):
            best, best_s = c, S
    if best_s is None:
        raise InfeasibleError(f"no support of size {k} is reachable from all of rho0")
    sol = constrained_transport(graph, cost, rho0, best_s)
    return CompressionResult(tuple(best_s), sol.result, sol.cost, [])
