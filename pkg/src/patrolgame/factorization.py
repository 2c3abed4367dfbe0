"""Factorizations of regular networks into spanning regular factors.

A 1-factorization partitions the arcs of a complete (or regular) network
into perfect matchings.  The round-robin construction handles any even
complete network; exhaustive enumeration is guarded to at most 8 nodes,
beyond which a randomized heuristic with cycle-rebalancing swaps stands in
for the certified optimum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import FactorizationError, SizeGuardError, ValidationError
from .network import Network

ENUMERATION_NODE_LIMIT = 8


@dataclass(frozen=True)
class Factorization:
    """Arc-disjoint spanning m-regular factors covering every arc."""

    network: Network
    regularity: int
    factors: tuple[frozenset, ...]
    certified: bool = True

    @property
    def delta(self) -> Fraction:
        """Largest factor length."""
        return max(self.factor_length(i) for i in range(len(self.factors)))

    def factor_length(self, i: int) -> Fraction:
        return sum((self.network.arc(a).length for a in self.factors[i]), Fraction(0))

    def complement(self, i: int) -> Network:
        """The network minus factor i."""
        return self.network.without_arcs(self.factors[i])

    def as_key(self) -> frozenset:
        return frozenset(self.factors)


def _degree_map(net: Network, arc_ids) -> dict[str, int]:
    deg = {n: 0 for n in net.nodes}
    for aid in arc_ids:
        a = net.arc(aid)
        deg[a.u] += 1
        deg[a.v] += 2 if a.u == a.v else 1
    return deg


def validate_factorization(net: Network, factors, m: int) -> list[str]:
    """Return a list of violation messages; empty means valid.

    Checks each factor is m-regular and spanning, the factors cover every
    arc, and no two factors share an arc.
    """
    if not net.is_simple:
        return ["network is not simple"]
    violations = []
    valid_ids = {arc.id for arc in net.arcs}
    seen: dict[str, int] = {}
    factors = [frozenset(f) for f in factors]
    for i, f in enumerate(factors, start=1):
        for aid in f:
            if aid not in valid_ids:
                violations.append(f"factor {i}: unknown arc {aid!r}")
                continue
            if aid in seen:
                violations.append(f"factors {seen[aid]} and {i} share arc {aid!r}")
            else:
                seen[aid] = i
        deg = _degree_map(net, (a for a in f if a in valid_ids))
        bad = {n: d for n, d in deg.items() if d != m}
        if bad:
            violations.append(f"factor {i}: not {m}-regular spanning (degrees {bad})")
    missing = [a.id for a in net.arcs if a.id not in seen]
    if missing:
        violations.append(f"arcs not covered by any factor: {sorted(missing)}")
    return violations


def _checked(net: Network, factors, m: int, certified=True) -> Factorization:
    violations = validate_factorization(net, factors, m)
    if violations:
        raise FactorizationError(violations)
    ordered = tuple(sorted((frozenset(f) for f in factors), key=lambda f: sorted(f)))
    return Factorization(net, m, ordered, certified)


def _require_even_complete(net: Network):
    n = len(net.nodes)
    if n % 2 != 0:
        raise ValidationError("1-factorization needs an even node count")
    if not net.is_simple or len(net.arcs) != n * (n - 1) // 2 or any(net.degree(v) != n - 1 for v in net.nodes):
        raise ValidationError("network is not simple complete")


def _arc_lookup(net: Network) -> dict[tuple[str, str], str]:
    table = {}
    for a in net.arcs:
        table[(a.u, a.v)] = a.id
        table[(a.v, a.u)] = a.id
    return table


def round_robin_one_factorization(net: Network, node_order=None) -> Factorization:
    """Circle-method 1-factorization of a complete network on 2n nodes."""
    _require_even_complete(net)
    nodes = list(node_order) if node_order is not None else list(net.nodes)
    table = _arc_lookup(net)
    pivot, others = nodes[0], nodes[1:]
    m = len(others)
    factors = []
    for r in range(m):
        pairs = [(pivot, others[r])]
        for i in range(1, len(nodes) // 2):
            pairs.append((others[(r + i) % m], others[(r - i) % m]))
        factors.append(frozenset(table[p] for p in pairs))
    return _checked(net, factors, 1)


def _perfect_matchings(pairs_free: int, adj: dict[int, set[int]], forced: tuple[int, int] | None = None):
    """Yield perfect matchings (as frozensets of node-index pairs) of the
    graph given by `adj`; `forced` pins one pair into every matching."""
    nodes = sorted(adj)

    def rec(remaining: frozenset, acc):
        if not remaining:
            yield frozenset(acc)
            return
        u = min(remaining)
        for v in sorted(adj[u] & remaining - {u}):
            acc.append((u, v))
            yield from rec(remaining - {u, v}, acc)
            acc.pop()

    remaining = frozenset(nodes)
    acc = []
    if forced is not None:
        u, v = forced
        acc.append((u, v))
        remaining -= {u, v}
    yield from rec(remaining, acc)


def enumerate_one_factorizations(net: Network):
    """Yield every 1-factorization of a small complete network exactly once.

    Factorizations are distinct as unordered sets of factors; the generator
    branches on the lowest uncovered arc so no set is produced twice.
    """
    _require_even_complete(net)
    n = len(net.nodes)
    if n > ENUMERATION_NODE_LIMIT:
        raise SizeGuardError(f"enumeration guarded to <= {ENUMERATION_NODE_LIMIT} nodes, got {n}")
    names = list(net.nodes)
    index = {v: i for i, v in enumerate(names)}
    table = _arc_lookup(net)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def rec(covered: frozenset, factors):
        if len(covered) == len(all_pairs):
            yield tuple(factors)
            return
        lowest = next(p for p in all_pairs if p not in covered)
        adj = {i: {j for j in range(n) if i != j and ((min(i, j), max(i, j)) not in covered)} for i in range(n)}
        for matching in _perfect_matchings(n // 2, adj, forced=lowest):
            factors.append(matching)
            yield from rec(covered | matching, factors)
            factors.pop()

    for combo in rec(frozenset(), []):
        factors = [frozenset(table[(names[i], names[j])] for i, j in f) for f in combo]
        yield _checked(net, factors, 1)


def best_one_factorization(net: Network, heuristic: bool = False, restarts: int = 32, seed: int = 0) -> Factorization:
    """1-factorization minimizing the largest factor length.

    Exhaustive (certified) up to the enumeration guard; with `heuristic` the
    guard is lifted and a seeded round-robin restart search with pairwise
    cycle-rebalancing swaps returns an uncertified result.
    """
    _require_even_complete(net)
    if len(net.nodes) <= ENUMERATION_NODE_LIMIT and not heuristic:
        best = None
        for f in enumerate_one_factorizations(net):
            if best is None or f.delta < best.delta:
                best = f
        return best
    if not heuristic:
        raise SizeGuardError(
            f"exhaustive search guarded to <= {ENUMERATION_NODE_LIMIT} nodes; pass heuristic=True")
    rng = random.Random(seed)
    nodes = list(net.nodes)
    best = None
    for _ in range(restarts):
        rng.shuffle(nodes)
        cand = round_robin_one_factorization(net, node_order=nodes)
        cand = _rebalance(cand)
        if best is None or cand.delta < best.delta:
            best = cand
    return Factorization(best.network, best.regularity, best.factors, certified=False)


def _rebalance(f: Factorization) -> Factorization:
    """Local improvement: the union of two perfect matchings is a disjoint
    set of even cycles, each of which can be re-split two ways; pick the
    split minimizing the larger factor length."""
    net = f.network
    factors = [set(x) for x in f.factors]
    improved = True
    while improved:
        improved = False
        lengths = [sum((net.arc(a).length for a in x), Fraction(0)) for x in factors]
        worst = max(range(len(factors)), key=lambda i: lengths[i])
        for j in range(len(factors)):
            if j == worst:
                continue
            new_a, new_b = _best_cycle_split(net, factors[worst], factors[j])
            new_max = max(sum((net.arc(a).length for a in new_a), Fraction(0)),
                          sum((net.arc(a).length for a in new_b), Fraction(0)))
            if new_max < max(lengths[worst], lengths[j]):
                factors[worst], factors[j] = set(new_a), set(new_b)
                improved = True
                break
    return _checked(net, factors, 1, certified=False)


def _best_cycle_split(net: Network, fa: set, fb: set):
    # Two disjoint perfect matchings form a 2-regular union: disjoint even
    # cycles alternating between the matchings.
    owner = {aid: 0 for aid in fa}
    owner.update({aid: 1 for aid in fb})
    arc_at: dict[tuple[str, int], str] = {}
    for aid, side in owner.items():
        a = net.arc(aid)
        arc_at[(a.u, side)] = aid
        arc_at[(a.v, side)] = aid
    visited: set[str] = set()
    cycles = []
    for start_arc in sorted(owner):
        if start_arc in visited:
            continue
        cycle = []
        cur = start_arc
        node = net.arc(cur).u
        side = owner[cur]
        while cur not in visited:
            visited.add(cur)
            cycle.append(cur)
            node = net.arc(cur).other(node)
            side = 1 - side
            cur = arc_at[(node, side)]
        cycles.append(cycle)
    best = None
    for mask in range(1 << len(cycles)):
        side_a, side_b = [], []
        for k, cyc in enumerate(cycles):
            evens = cyc[0::2]
            odds = cyc[1::2]
            if mask >> k & 1:
                side_a += odds
                side_b += evens
            else:
                side_a += evens
                side_b += odds
        la = sum((net.arc(a).length for a in side_a), Fraction(0))
        lb = sum((net.arc(a).length for a in side_b), Fraction(0))
        key = max(la, lb)
        if best is None or key < best[0]:
            best = (key, side_a, side_b)
    return best[1], best[2]


def girth(net: Network) -> Fraction:
    """Minimum total length over circuits; errors on acyclic networks."""
    best = None
    for a in net.arcs:
        if a.u == a.v:
            cand = a.length
        else:
            try:
                reduced = net.without_arcs([a.id])
            except ValidationError:
                continue  # bridge: removing it disconnects, no circuit through it
            d = reduced.distance(reduced.node_point(a.u), reduced.node_point(a.v))
            cand = a.length + d
        if best is None or cand < best:
            best = cand
    if best is None:
        raise ValidationError("network is acyclic")
    return best
