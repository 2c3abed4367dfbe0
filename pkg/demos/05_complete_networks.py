"""Complete networks: factorizations, tour mixtures, and where they stop.

Splitting the arcs of an even complete network into perfect matchings leaves
Eulerian complements; mixing their tours with the right weights intercepts
every attack with probability alpha/mu as long as alpha stays below mu minus
the heaviest matching. Above that range the guarantee genuinely fails, which
an exhaustive search over short patrols exhibits on the unit four-node
network.
"""

from fractions import Fraction
from pathlib import Path

from patrolgame import (
    best_one_factorization,
    complete_network,
    complete_patrolling,
    enumerate_one_factorizations,
    girth,
    interception_probability,
    k4_tightness_attack,
    parse_network,
    patrol_search,
    round_robin_one_factorization,
    value_complete,
)

HERE = Path(__file__).parent
k4 = parse_network((HERE / "data" / "unit_k4.net").read_text())

print("1-factorizations: K4 =", sum(1 for _ in enumerate_one_factorizations(k4)),
      "| K6 =", sum(1 for _ in enumerate_one_factorizations(complete_network(6))))

fact = round_robin_one_factorization(k4)
print("unit K4: delta(F) =", fact.delta, "so the value formula holds for alpha <=",
      k4.total_length - fact.delta)

patrol = complete_patrolling(k4, fact)
for alpha in (1, 2, 3, 4):
    node = interception_probability(patrol, k4.node_point("v1"), 0, alpha)
    reg = interception_probability(patrol, k4.point("v1-v2", Fraction(1, 3)), 0, alpha)
    print(f"  alpha={alpha}: value {value_complete(k4, fact, alpha)}, "
          f"node prob {node}, regular-point prob {reg}")

# girth comparison: mu - delta is much larger than the girth
print("girth of unit K4:", girth(k4), "vs mu - delta =", k4.total_length - fact.delta)

# Past the validated range the uniform attack over a shrunken time window
# beats alpha/mu against every short patrol.
alpha = 5
attack = k4_tightness_attack(k4, alpha=alpha)
print(f"searching all <=8-step patrols against the windowed attack (alpha={alpha})...")
res = patrol_search(k4, attack, alpha, max_steps=8,
                    offset_step=Fraction(1, 4), grid_step=Fraction(1, 4))
print(f"best interception found: {res.probability} < alpha/mu = {Fraction(alpha, 6)} "
      f"(margin {Fraction(alpha, 6) - res.probability}, {res.walks_examined} walks)")

# Larger even networks: the heuristic factorization search is available past
# the exhaustive guard.
k10 = complete_network(10)
heur = best_one_factorization(k10, heuristic=True, restarts=8)
print("unit K10 heuristic factorization: delta =", heur.delta,
      "(certified)" if heur.certified else "(not certified)")
