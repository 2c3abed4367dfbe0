"""Extremity patrolling: the periodic patrol that matches the game value.

One period double-traverses the core once and tours every extremity
component twice, at moments far enough apart that every point of the tree is
covered twice per period with both gaps at least the attack duration. With a
uniform random phase the interception probability of any fixed attack is
then at least alpha/(mu + lambda(E)) -- the game value -- which the
best-response grid search below confirms point by point.
"""

from fractions import Fraction
from pathlib import Path

from patrolgame import (
    attacker_best_response,
    e_patrolling,
    game_value_tree,
    parse_network,
    subtree_decomposition,
)

HERE = Path(__file__).parent
tree = parse_network((HERE / "data" / "sample_tree.net").read_text())

for alpha in (2, 4, 6, 8):
    patrol = e_patrolling(tree, alpha)
    walk, _ = patrol.components[0]
    dec = subtree_decomposition(tree, alpha)
    v_star = game_value_tree(tree, alpha)
    print(f"alpha = {alpha}: period {walk.duration} = 2*(10 + {dec.lambda_e})")

    counts = {}
    for arc in tree.arcs:
        x = tree.point(arc.id, arc.length / 3)
        counts[arc.id] = len(walk.visit_times(x))
    print("  visits per period at arc sample points:", counts)

    br = attacker_best_response(patrol, alpha, space_step=Fraction(1, 8),
                                extra_points=[c.root for c in dec.components])
    print(f"  worst grid point {br.point}: intercepted with {br.probability} "
          f"(game value {v_star})")
    print()
