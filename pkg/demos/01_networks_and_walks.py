"""Networks, points, distances and walks: the basic vocabulary.

A network is a connected metric multigraph. Points live either at nodes or
at exact rational offsets inside arcs, and walks move at unit speed. Run:

    python demos/01_networks_and_walks.py
"""

from fractions import Fraction
from pathlib import Path

from patrolgame import (
    components_after_removal,
    double_traversal,
    eulerian_tour,
    parse_network,
)

HERE = Path(__file__).parent

tree = parse_network((HERE / "data" / "sample_tree.net").read_text())
print("tree length:", tree.total_length)
print("is a tree:", tree.is_tree(), "| leaves:", tree.leaf_nodes())

# Distances are exact rationals, measured along the unique tree path.
a = tree.node_point("L3")
b = tree.node_point("L62")
print("d(L3, L62) =", tree.distance(a, b))
mid = tree.point("bBC", Fraction(1, 2))
print("d(L3, midpoint-ish of B-C) =", tree.distance(a, mid))

# Removing a point splits a tree into components whose measures add back up.
for x in (tree.node_point("B"), tree.point("aL62", Fraction(1, 2))):
    comps = components_after_removal(tree, x)
    print(f"removing {x}: component measures {[str(c.measure) for c in comps]}")

# A depth-first double traversal is the canonical closed tour of a tree:
# every arc exactly twice, so the period is twice the length.
tour = double_traversal(tree, "A")
print("double traversal duration:", tour.duration, "| closed:", tour.is_closed)
print("L62 visited at times:", tour.visit_times(tree.node_point("L62")))

# Eulerian networks admit tours covering each arc exactly once.
k4 = parse_network((HERE / "data" / "unit_k4.net").read_text())
print("unit K4 Eulerian?", k4.is_eulerian())
q = k4.without_arcs(["v1-v2", "v3-v4"])  # drop a perfect matching
w = eulerian_tour(q)
print("K4 minus a matching: Eulerian tour of duration", w.duration)
