"""Exact minimum-cost flow on graphs.

Two entry points:

* :func:`wasserstein` - cheapest flow turning ``rho0`` into a fixed ``rho1``.
* :func:`constrained_transport` - cheapest flow whose result is supported
  on a given vertex set ``S`` (the target distribution is free).

Both are uncapacitated transshipment problems with nonnegative costs. The
general solver is successive shortest paths with Dijkstra on reduced
costs. For the support-constrained problem the super-sink network has no
capacities on the way to the sink, so its optimum is the shortest-path
forest rooted at ``S``; :func:`constrained_transport` uses that forest
directly by default and can be asked to run the general solver instead.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, ValidationError
from .graph import Flow, Graph, check_cost_matrix, check_distribution, flow_cost, flow_result

_EPS = 1e-15


@dataclass
class TransportSolution:
    """An optimal flow with its cost and resulting distribution."""

    flow: Flow
    cost: float
    result: np.ndarray
    augmentations: int = field(default=0, compare=False)


def _solver_arcs(graph: Graph, cost: np.ndarray):
    """Directed arcs ``(v, w, c)`` of the graph with finite cost."""
    arcs = []
    for v, w in graph.sorted_edges():
        c = cost[v, w]
        if np.isfinite(c):
            arcs.append((v, w, float(c)))
            arcs.append((w, v, float(c)))
    return arcs


def min_cost_flow(n_nodes: int, arcs, supply):
    """Uncapacitated min-cost transshipment by successive shortest paths.

    Parameters
    ----------
    n_nodes : int
        Number of nodes.
    arcs : sequence of (tail, head, cost)
        Directed arcs with nonnegative cost and unlimited capacity.
    supply : array-like of shape (n_nodes,)
        Net supply; positive entries are sources, negative are sinks. Must
        sum to (approximately) zero.

    Returns
    -------
    flows : ndarray
        Flow on each arc, aligned with ``arcs``.
    augmentations : int
        Number of augmenting paths used.

    Raises
    ------
    InfeasibleError
        If some supply cannot reach any remaining demand.
    """
    supply = np.asarray(supply, dtype=float)
    if abs(supply.sum()) > 1e-9:
        raise ValidationError(f"supplies sum to {supply.sum():.3g}, not 0")
    src, snk = n_nodes, n_nodes + 1
    total = n_nodes + 2

    # residual arcs stored in pairs: 2i forward, 2i+1 backward
    head, cap, cst = [], [], []
    adj = [[] for _ in range(total)]

    def add(u, v, capacity, c):
        adj[u].append(len(head))
        head.append(v)
        cap.append(capacity)
        cst.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(0.0)
        cst.append(-c)

    for u, v, c in arcs:
        if c < 0:
            raise ValidationError(f"negative arc cost {c} on ({u}, {v})")
        add(u, v, np.inf, c)
    n_real = len(arcs)
    for v in range(n_nodes):
        if supply[v] > _EPS:
            add(src, v, float(supply[v]), 0.0)
        elif supply[v] < -_EPS:
            add(v, snk, float(-supply[v]), 0.0)

    need = float(supply[supply > 0].sum())
    pot = [0.0] * total
    n_aug = 0
    while need > 1e-12:
        dist = [np.inf] * total
        prev = [-1] * total
        dist[src] = 0.0
        heap = [(0.0, src)]
        done = [False] * total
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            pu = pot[u]
            for a in adj[u]:
                if cap[a] <= _EPS:
                    continue
                v = head[a]
                if done[v]:
                    continue
                nd = d + max(0.0, cst[a] + pu - pot[v])
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = a
                    heapq.heappush(heap, (nd, v))
        if not np.isfinite(dist[snk]):
            raise InfeasibleError(f"mass {need:.3g} cannot reach any sink")
        dt = dist[snk]
        for v in range(total):
            pot[v] += min(dist[v], dt)
        push = need
        v = snk
        while v != src:
            a = prev[v]
            push = min(push, cap[a])
            v = head[a ^ 1]
        v = snk
        while v != src:
            a = prev[v]
            cap[a] -= push
            cap[a ^ 1] += push
            v = head[a ^ 1]
        need -= push
        n_aug += 1

    flows = np.array([cap[2 * i + 1] for i in range(n_real)])
    return flows, n_aug


def _to_flow(arcs, flows) -> Flow:
    out = {}
    for (u, v, _), f in zip(arcs, flows):
        if f > _EPS:
            out[(u, v)] = out.get((u, v), 0.0) + float(f)
    # opposite flows on one edge can cancel
    for (u, v) in list(out):
        if (v, u) in out and (u, v) in out:
            a, b = out[(u, v)], out[(v, u)]
            del out[(u, v)], out[(v, u)]
            if a > b:
                out[(u, v)] = a - b
            elif b > a:
                out[(v, u)] = b - a
    return out


def wasserstein(graph: Graph, cost, rho0, rho1) -> TransportSolution:
    """Minimum-cost flow on ``graph`` carrying ``rho0`` to ``rho1``.

    Vertices with ``rho0 > rho1`` are sources and the rest sinks. Edges
    whose cost is infinite are not available to the flow.
    """
    n = graph.n
    cost = check_cost_matrix(cost, n)
    rho0 = check_distribution(rho0, n, "rho0")
    rho1 = check_distribution(rho1, n, "rho1")
    arcs = _solver_arcs(graph, cost)
    supply = rho0 - rho1
    supply -= supply.mean()  # absorb rounding so supplies sum to exactly ~0
    flows, n_aug = min_cost_flow(n, arcs, supply)
    flow = _to_flow(arcs, flows)
    return TransportSolution(flow, flow_cost(flow, cost), flow_result(flow, rho0), n_aug)


def _check_support(S, n):
    S = sorted(set(int(s) for s in S))
    if not S:
        raise ValidationError("support set is empty")
    if S[0] < 0 or S[-1] >= n:
        raise ValidationError(f"support set has vertices outside [0, {n})")
    return S


def nearest_support_forest(cost_matrix: np.ndarray, S):
    """Multi-source Dijkstra from ``S`` on a dense cost matrix (``inf`` = no edge).

    Returns ``(dist, parent, order)`` where ``parent[v]`` is the next vertex
    on ``v``'s shortest path towards ``S`` (``-1`` at roots and unreachable
    vertices) and ``order`` lists reached vertices by finalization. Ties go
    to the lowest vertex index.
    """
    n = cost_matrix.shape[0]
    dist = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    dist[list(S)] = 0.0
    done = np.zeros(n, dtype=bool)
    order = []
    for _ in range(n):
        cand = np.where(done, np.inf, dist)
        u = int(np.argmin(cand))
        if not np.isfinite(cand[u]):
            break
        done[u] = True
        order.append(u)
        nd = dist[u] + cost_matrix[u]
        better = (~done) & (nd < dist)
        better[u] = False
        dist[better] = nd[better]
        parent[better] = u
    return dist, parent, order


def constrained_transport(graph: Graph, cost, rho0, S, method: str = "forest") -> TransportSolution:
    """Cheapest flow from ``rho0`` whose result is supported on ``S``.

    Equivalent to a min-cost flow into a virtual sink attached to every
    vertex of ``S`` at zero cost. ``method="forest"`` solves it through the
    shortest-path forest rooted at ``S``; ``method="ssp"`` builds the
    super-sink network explicitly and runs :func:`min_cost_flow`.
    The returned ``result`` is the mass absorbed at each vertex of ``S``.
    """
    n = graph.n
    cost = check_cost_matrix(cost, n)
    rho0 = check_distribution(rho0, n, "rho0")
    S = _check_support(S, n)

    if method == "ssp":
        arcs = _solver_arcs(graph, cost)
        sink = n
        all_arcs = arcs + [(s, sink, 0.0) for s in S]
        supply = np.append(rho0, -rho0.sum())
        flows, n_aug = min_cost_flow(n + 1, all_arcs, supply)
        flow = _to_flow(arcs, flows[: len(arcs)])
        absorbed = np.zeros(n)
        for (s, _, _), f in zip(all_arcs[len(arcs):], flows[len(arcs):]):
            absorbed[s] = f
        result = flow_result(flow, rho0)
        if not np.allclose(result, absorbed, atol=1e-9):
            raise InfeasibleError("flow result does not match absorbed mass")
        return TransportSolution(flow, flow_cost(flow, cost), absorbed, n_aug)
    if method != "forest":
        raise ValidationError(f"unknown method {method!r}")

    dense = np.full((n, n), np.inf)
    for v, w in graph.edges:
        dense[v, w] = dense[w, v] = cost[v, w]
    dist, parent, order = nearest_support_forest(dense, S)
    bad = np.flatnonzero((rho0 > 0) & ~np.isfinite(dist))
    if bad.size:
        raise InfeasibleError(f"vertex {int(bad[0])} with mass {rho0[bad[0]]:.3g} cannot reach the support")
    acc = rho0.copy()
    flow = {}
    for v in reversed(order):
        p = parent[v]
        if p >= 0 and acc[v] > 0:
            flow[(v, int(p))] = float(acc[v])
            acc[p] += acc[v]
            acc[v] = 0.0
    result = np.zeros(n)
    result[S] = acc[S]
    return TransportSolution(flow, flow_cost(flow, cost), result, len(order))


def shortest_path_lengths(graph: Graph, cost) -> np.ndarray:
    """All-pairs shortest path lengths (Floyd-Warshall on the dense matrix)."""
    n = graph.n
    cost = np.asarray(cost, dtype=float)
    d = np.full((n, n), np.inf)
    for v, w in graph.edges:
        d[v, w] = d[w, v] = cost[v, w]
    np.fill_diagonal(d, 0.0)
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d
