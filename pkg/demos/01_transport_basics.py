"""
Transport on a graph
====================

Moving probability mass along edges, and squeezing it onto a few vertices.
"""

import numpy as np

from otgs import Graph, constrained_transport, wasserstein

# A triangle where the direct 0-2 edge is expensive.
g = Graph.complete(3)
cost = np.array([[0, 1, 10], [1, 0, 1], [10, 1, 0]], dtype=float)
uniform = np.full(3, 1 / 3)

# Pulling everything onto vertex 0: mass at 2 goes round via 1.
sol = wasserstein(g, cost, uniform, [1, 0, 0])
print("W(uniform -> delta_0) =", round(sol.cost, 6))
print("flow:", {e: round(m, 4) for e, m in sol.flow.items()})

# Let the solver choose where mass lands, as long as it stays on S.
for S in ([0], [1], [2], [0, 2]):
    sol = constrained_transport(g, cost, uniform, S)
    print(f"S={S}: cost {sol.cost:.4f}, result {np.round(sol.result, 4)}")

# The middle vertex is the cheapest single summary: 2/3.
