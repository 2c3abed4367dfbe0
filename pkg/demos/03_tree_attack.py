"""The horizon attack strategy on trees.

The attacker starts at a uniformly random time in [0, T] and places the
attack spatially so that no patrol can exploit concentration: the core gets
its own length share of the probability, each extremity component twice its
length share, spread over the component's leaves with equal branch density.
Choosing T = 3*alpha/epsilon makes the strategy epsilon-optimal.
"""

from fractions import Fraction
from pathlib import Path

from patrolgame import (
    RootedSubtree,
    density,
    epsilon_horizon,
    parse_network,
    subtree_decomposition,
    tree_attack_strategy,
)
from patrolgame.serialize import write_attack

HERE = Path(__file__).parent
tree = parse_network((HERE / "data" / "sample_tree.net").read_text())

for alpha in (2, 4, 6, 8):
    att = tree_attack_strategy(tree, alpha, epsilon=Fraction(1, 20))
    print(f"alpha = {alpha}, horizon T = {att.temporal.value}")
    for p, m in att.atoms:
        print(f"  leaf {p}: mass {m}")
    for part in att.uniform_parts:
        print(f"  core: mass {part.mass} at density {part.density}")
    print()

# The density of each extremity component is exactly 2/(mu + lambda(E)),
# and no subtree hanging at a component root exceeds it.
alpha = 4
att = tree_attack_strategy(tree, alpha)
dec = subtree_decomposition(tree, alpha)
bound = Fraction(2, 10 + dec.lambda_e)
for comp in dec.components:
    rho = density(att, comp.subtree)
    print(f"component at {comp.root}: density {rho} (bound {bound})")

print()
print("horizon for epsilon=1/20 at alpha=4:", epsilon_horizon(4, Fraction(1, 20)))
print()
print("serialized strategy file:")
print(write_attack(tree_attack_strategy(tree, 8)))
