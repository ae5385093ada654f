"""
Most informative subgraph is a clique
=====================================

Edges of a base graph appear with probability C/2 and all other pairs
never appear. The exact MI of an induced subgraph with C then depends on
how many base edges it contains, so the best 3-vertex subgraph is the
triangle.
"""

from otgs import Graph, infomax_oracle, make_clique_gadget, subset_mi_exact
from otgs.info import binary_entropy, exact_edge_mi

base = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5)])
model = make_clique_gadget(base)

# a single edge carries h(1/4) - 1/2 bits
D = exact_edge_mi(0.5, 0.0, 0.5)
print(f"one edge : {D:.7f}  (h(1/4) - 1/2 = {binary_entropy(0.25) - 0.5:.7f})")

# edges are correlated through C, so three edges give less than 3D
tri = subset_mi_exact(model, [0, 1, 2])
print(f"triangle : {tri:.7f}  vs 3D = {3 * D:.7f}")

res = infomax_oracle(model, 3, keep_table=True)
print("best 3-subset:", res.best_subset, f"{res.best_mi:.7f} bits")
for S, mi in sorted(res.table.items(), key=lambda kv: -kv[1])[:5]:
    print("  ", S, f"{mi:.7f}")
