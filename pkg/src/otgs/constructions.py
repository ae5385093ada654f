"""Class-conditional edge models with exact information oracles.

An :class:`EdgeBernoulliModel` draws ``C ~ Bern(p_class)`` and then every
vertex pair independently as an edge with probability ``q0`` or ``q1``
depending on ``C``; node features are the constant 1. Two instances are
provided: the max-clique reduction gadget and the gadget on which cheapest
support-constrained transport and most-informative subset disagree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .compress import ot_compress
from .datasets import LabeledDataset
from .errors import InstanceTooLargeError, ValidationError
from .flow import constrained_transport
from .graph import Graph
from .info import binary_entropy

MAX_PATTERN_EDGES = 20


@dataclass
class EdgeBernoulliModel:
    n: int
    p_class: float
    q0: np.ndarray
    q1: np.ndarray

    def __post_init__(self):
        self.q0 = np.asarray(self.q0, dtype=float)
        self.q1 = np.asarray(self.q1, dtype=float)
        for q in (self.q0, self.q1):
            if q.shape != (self.n, self.n):
                raise ValidationError(f"edge probabilities must be {self.n}x{self.n}")
            if np.any((q < 0) | (q > 1)) or not np.array_equal(q, q.T):
                raise ValidationError("edge probabilities must be symmetric and inside [0, 1]")
        if not 0.0 <= self.p_class <= 1.0:
            raise ValidationError("p_class outside [0, 1]")

    def delta(self) -> np.ndarray:
        d = np.abs(self.q0 - self.q1)
        np.fill_diagonal(d, 0.0)
        return d

    def informative_pairs(self, subset) -> list:
        vs = sorted(set(int(v) for v in subset))
        return [(u, v) for u, v in combinations(vs, 2) if self.q0[u, v] != self.q1[u, v]]


def make_clique_gadget(base_graph: Graph) -> EdgeBernoulliModel:
    """Edges of ``base_graph`` appear with probability ``C / 2``; all others never."""
    n = base_graph.n
    q0 = np.zeros((n, n))
    q1 = 0.5 * base_graph.adjacency().astype(float)
    return EdgeBernoulliModel(n, 0.5, q0, q1)


def make_monotonicity_gadget(n: int, const: float) -> EdgeBernoulliModel:
    """Gadget with a single most informative pair ``{0, 1}``.

    ``|q0 - q1|`` is ``const`` on ``{0, 1}``, ``const / 2`` on every other
    pair touching 0 or 1, and 0 elsewhere, realized as
    ``q = 1/2 -+ delta/2`` so edge MI grows strictly with the gap.
    """
    if int(n) != n or n < 4:
        raise ValidationError(f"need n >= 4, got {n}")
    if not 0.0 < const < 1.0:
        raise ValidationError(f"const must lie in (0, 1), got {const}")
    n = int(n)
    delta = np.zeros((n, n))
    delta[[0, 1], :] = const / 2
    delta[:, [0, 1]] = const / 2
    delta[0, 1] = delta[1, 0] = const
    np.fill_diagonal(delta, 0.0)
    q0 = 0.5 - delta / 2
    q1 = 0.5 + delta / 2
    np.fill_diagonal(q0, 0.5)
    np.fill_diagonal(q1, 0.5)
    return EdgeBernoulliModel(n, 0.5, q0, q1)


def _pattern_probs(q: np.ndarray) -> np.ndarray:
    """Probabilities of all ``2**len(q)`` independent-bit patterns."""
    p = np.ones(1)
    for qi in q:
        p = np.kron(p, np.array([1.0 - qi, qi]))
    return p


def _plogp(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


def subset_mi_exact(model: EdgeBernoulliModel, subset, max_edges: int = MAX_PATTERN_EDGES) -> float:
    """Exact ``I(G[subset]; C)`` in bits.

    Pairs with ``q0 == q1`` are independent of everything and drop out.
    When all informative pairs share the same ``(q0, q1)`` the number of
    present edges is sufficient and the sum runs over counts; otherwise
    every pattern of the informative pairs is enumerated.
    """
    pairs = model.informative_pairs(subset)
    if not pairs:
        return 0.0
    pc = np.array([1.0 - model.p_class, model.p_class])
    q = np.array([[model.q0[u, v] for u, v in pairs], [model.q1[u, v] for u, v in pairs]])
    cond_h = sum(pc[b] * float(np.sum(binary_entropy(q[b]))) for b in (0, 1))
    m = len(pairs)
    if np.all(q[0] == q[0, 0]) and np.all(q[1] == q[1, 0]):
        j = np.arange(m + 1)
        mult = np.array([comb(m, int(t)) for t in j], dtype=float)
        per = sum(pc[b] * q[b, 0] ** j * (1 - q[b, 0]) ** (m - j) for b in (0, 1))
        joint_h = -float(np.sum(mult * _plogp(per)))
    else:
        if m > max_edges:
            raise InstanceTooLargeError(f"{m} informative edges exceed the enumeration limit {max_edges}")
        mix = pc[0] * _pattern_probs(q[0]) + pc[1] * _pattern_probs(q[1])
        joint_h = -float(np.sum(_plogp(mix)))
    return float(max(joint_h - cond_h, 0.0))


@dataclass
class OracleResult:
    best_subset: tuple
    best_mi: float
    table: dict = field(default_factory=dict)


def infomax_oracle(model: EdgeBernoulliModel, k: int, limit: int = 10**5, keep_table: bool = False) -> OracleResult:
    """Exhaustive search for the size-``k`` subset with the largest exact MI."""
    n = model.n
    if int(k) != k or not 1 <= k <= n:
        raise ValidationError(f"k={k} outside [1, {n}]")
    if comb(n, k) > limit:
        raise InstanceTooLargeError(f"C({n}, {k}) = {comb(n, k)} subsets exceeds the limit {limit}")
    best, best_mi = None, -1.0
    table = {}
    for S in combinations(range(n), int(k)):
        mi = subset_mi_exact(model, S)
        if keep_table:
            table[S] = mi
        if mi > best_mi + 1e-12:
            best, best_mi = S, mi
    return OracleResult(best, best_mi, table)


def decide(model: EdgeBernoulliModel, k: int, gamma: float, digits: int | None = None) -> int:
    """1 if some size-``k`` subset reaches MI ``gamma``, else 0.

    With ``digits`` the best MI is rounded first, so a threshold copied
    from a printed value decides the same way as the printed value.
    """
    best = infomax_oracle(model, k).best_mi
    if digits is not None:
        best = round(best, digits)
    return int(best >= gamma - 1e-12)


def sample_dataset(model: EdgeBernoulliModel, m: int, seed) -> LabeledDataset:
    """Draw ``m`` iid ``(G, X, C)`` samples; features are the constant 1."""
    if int(m) != m or m < 1:
        raise ValidationError("m must be a positive integer")
    rng = np.random.default_rng(seed)
    n = model.n
    labels = (rng.random(m) < model.p_class).astype(np.int64)
    iu = np.triu_indices(n, 1)
    q = np.where(labels[:, None] == 1, model.q1[iu][None, :], model.q0[iu][None, :])
    upper = rng.random(q.shape) < q
    adj = np.zeros((m, n, n), dtype=bool)
    adj[:, iu[0], iu[1]] = upper
    adj |= adj.transpose(0, 2, 1)
    return LabeledDataset(adj, np.ones((m, n, 1)), labels)


@dataclass
class MonotonicityCertificate:
    """Numbers comparing cheapest compression against the most informative subset."""

    greedy_support: tuple
    greedy_cost: float
    greedy_mi: float
    oracle_support: tuple
    oracle_mi: float
    oracle_cost: float

    @property
    def violated(self) -> bool:
        """Strictly cheaper transport, strictly less information."""
        return self.greedy_cost < self.oracle_cost - 1e-12 and self.greedy_mi < self.oracle_mi - 1e-12


def monotonicity_certificate(n: int, const: float, k: int = 2) -> MonotonicityCertificate:
    """Run compression (``c = delta``, uniform ``rho0``) and the oracle on the gadget."""
    model = make_monotonicity_gadget(n, const)
    g = Graph.complete(n)
    rho0 = np.full(n, 1.0 / n)
    cost = model.delta()
    res = ot_compress(g, rho0, cost, k)
    orc = infomax_oracle(model, k)
    orc_cost = constrained_transport(g, cost, rho0, orc.best_subset).cost
    return MonotonicityCertificate(
        res.support, res.cost, subset_mi_exact(model, res.support),
        orc.best_subset, orc.best_mi, orc_cost,
    )
