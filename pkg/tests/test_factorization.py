import random
from fractions import Fraction

import pytest

from patrolgame import (
    Factorization,
    Network,
    SizeGuardError,
    ValidationError,
    best_one_factorization,
    complete_network,
    enumerate_one_factorizations,
    girth,
    round_robin_one_factorization,
    validate_factorization,
)
from oracles import count_one_factorizations_bruteforce, girth_bruteforce

F = Fraction


def test_validate_ok(unit_k4):
    fact = round_robin_one_factorization(unit_k4)
    assert validate_factorization(unit_k4, fact.factors, 1) == []


def test_validate_shared_arc(unit_k4):
    factors = [frozenset({"v1-v2", "v3-v4"}), frozenset({"v1-v2", "v3-v4"}),
               frozenset({"v1-v4", "v2-v3"})]
    violations = validate_factorization(unit_k4, factors, 1)
    assert any("share arc" in v for v in violations)


def test_validate_not_spanning(unit_k6):
    rr = round_robin_one_factorization(unit_k6)
    broken = [set(f) for f in rr.factors]
    moved = next(iter(broken[0]))
    broken[0].discard(moved)
    violations = validate_factorization(unit_k6, broken, 1)
    assert any("not 1-regular" in v for v in violations)
    assert any("not covered" in v for v in violations)


@pytest.mark.parametrize("n,count,size", [(4, 3, 2), (6, 5, 3), (8, 7, 4)])
def test_round_robin(n, count, size):
    net = complete_network(n)
    fact = round_robin_one_factorization(net)
    assert len(fact.factors) == count
    assert all(len(f) == size for f in fact.factors)
    assert validate_factorization(net, fact.factors, 1) == []


def test_enumeration_counts_small(unit_k4, unit_k6):
    assert sum(1 for _ in enumerate_one_factorizations(unit_k4)) == 1
    facts = list(enumerate_one_factorizations(unit_k6))
    assert len(facts) == 6
    # frozen from the set-cover brute force over explicit perfect matchings
    assert count_one_factorizations_bruteforce(6) == 6
    keys = {f.as_key() for f in facts}
    assert len(keys) == 6  # pairwise distinct as unordered factor sets
    for f in facts:
        assert validate_factorization(unit_k6, f.factors, 1) == []


def test_enumeration_guard():
    with pytest.raises(SizeGuardError):
        next(enumerate_one_factorizations(complete_network(10)))


def test_enumeration_rejects_odd():
    with pytest.raises(ValidationError):
        next(enumerate_one_factorizations(complete_network(5)))


def test_best_unit_networks(unit_k4, unit_k6):
    assert best_one_factorization(unit_k4).delta == 2
    assert best_one_factorization(unit_k6).delta == 3
    assert best_one_factorization(unit_k4).certified


def test_best_weighted_k4():
    net = Network(
        ["v1", "v2", "v3", "v4"],
        [("v1-v2", "v1", "v2", 9), ("v1-v3", "v1", "v3", 1), ("v1-v4", "v1", "v4", 1),
         ("v2-v3", "v2", "v3", 1), ("v2-v4", "v2", "v4", 1), ("v3-v4", "v3", "v4", 1)])
    best = best_one_factorization(net)
    assert best.delta == 10  # the long arc always pairs with its opposite
    assert sum(1 for _ in enumerate_one_factorizations(net)) == 1


def test_best_heuristic_mode():
    net = complete_network(10)
    with pytest.raises(SizeGuardError):
        best_one_factorization(net)
    fact = best_one_factorization(net, heuristic=True, restarts=4)
    assert not fact.certified
    assert validate_factorization(net, fact.factors, 1) == []
    assert fact.delta == 5  # unit lengths: every perfect matching weighs n


def test_complement_regular_eulerian(unit_k6):
    fact = round_robin_one_factorization(unit_k6)
    for i in range(len(fact.factors)):
        q = fact.complement(i)
        assert all(q.degree(v) == 4 for v in q.nodes)
        assert q.is_eulerian()


def test_girth_fixtures(unit_k4, unit_k6):
    assert girth(unit_k4) == 3
    assert girth_bruteforce(unit_k4) == 3
    assert girth(unit_k6) == 3
    cyc = Network(["a", "b", "c", "d"],
                  [("e1", "a", "b", 1), ("e2", "b", "c", 2), ("e3", "c", "d", 3), ("e4", "d", "a", 4)])
    assert girth(cyc) == 10
    assert girth_bruteforce(cyc) == 10


def test_girth_acyclic(sample_tree):
    with pytest.raises(ValidationError):
        girth(sample_tree)


def test_girth_random_matches_bruteforce():
    rng = random.Random(47)
    for _ in range(10):
        n = rng.choice([4, 5])
        lengths = [F(rng.randint(1, 12), rng.choice([1, 2, 3])) for _ in range(n * (n - 1) // 2)]
        net = complete_network(n)
        net = Network(net.nodes, [(a.id, a.u, a.v, l) for a, l in zip(net.arcs, lengths)])
        assert girth(net) == girth_bruteforce(net)


def test_girth_inequality_random_lengths():
    # mu - delta(F) >= n(n-1)/2 * girth for every enumerated 1-factorization
    rng = random.Random(53)
    for n in (4, 6):
        base = complete_network(n)
        for _ in range(20):
            lengths = [F(rng.randint(1, 16), rng.choice([1, 2, 4])) for _ in base.arcs]
            net = Network(base.nodes, [(a.id, a.u, a.v, l) for a, l in zip(base.arcs, lengths)])
            g = girth(net)
            mu = net.total_length
            half_n = n // 2
            for fact in enumerate_one_factorizations(net):
                assert mu - fact.delta >= F(half_n * (half_n - 1), 2) * g
