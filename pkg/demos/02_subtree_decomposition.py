"""Extremity sets, cores and the subtree decomposition of a tree.

A regular point is "extreme" for duration alpha when the smaller of the two
components left by its removal measures less than alpha/2. The closure of
that set splits into closed subtrees hanging at local roots; the rest of the
tree is the core. As alpha grows the extremity set swallows the tree and the
core shrinks to a single point, the local root of the whole tree.
"""

from pathlib import Path

from patrolgame import (
    critical_alpha,
    extremity_set,
    game_value_tree,
    local_root_of_tree,
    parse_network,
    subtree_decomposition,
)

HERE = Path(__file__).parent
tree = parse_network((HERE / "data" / "sample_tree.net").read_text())

print("critical duration:", critical_alpha(tree))
print("local root of the tree:", local_root_of_tree(tree))
print()

for alpha in (2, 4, 6, 8):
    ext = extremity_set(tree, alpha)
    dec = subtree_decomposition(tree, alpha)
    print(f"alpha = {alpha}")
    print(f"  extremity measure lambda(E) = {ext.measure}, core measure = {dec.core.measure}")
    print(f"  game value alpha/(mu + lambda(E)) = {game_value_tree(tree, alpha)}")
    for j, comp in enumerate(dec.components, start=1):
        segs = ", ".join(str(s) for s in comp.subtree.segment_list())
        print(f"  component {j}: measure {comp.measure}, root {comp.root}, [{segs}]")
    print()
