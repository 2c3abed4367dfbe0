import random
from fractions import Fraction

import pytest

from patrolgame import (
    SubNetwork,
    ValidationError,
    core,
    critical_alpha,
    extremity_set,
    local_root_of_tree,
    path_network,
    star_network,
    subtree_decomposition,
)
from conftest import random_tree
from oracles import min_side_measure

F = Fraction


def seg_set(sub):
    return {(s.arc, s.lo, s.hi) for s in sub.segment_list()}


def test_extremity_fixtures(sample_tree):
    ext = extremity_set(sample_tree, 2)
    assert ext.measure == 5
    assert seg_set(ext.as_subnetwork(sample_tree)) == {
        ("aL5", F(0), F(1)), ("aL62", F(1), F(2)), ("bL22", F(1), F(2)),
        ("cL3", F(0), F(1)), ("cL4", F(0), F(1))}
    ext8 = extremity_set(sample_tree, 8)
    assert ext8.measure == 10
    assert seg_set(ext8.as_subnetwork(sample_tree)) == {
        (a.id, F(0), a.length) for a in sample_tree.arcs}


def test_extremity_path():
    path = path_network(4, pieces=1)
    ext = extremity_set(path, 2)
    assert ext.measure == 2
    assert seg_set(ext.as_subnetwork(path)) == {("pa0", F(0), F(1)), ("pa0", F(3), F(4))}


def test_extremity_rejects_non_tree(unit_k4):
    with pytest.raises(ValidationError):
        extremity_set(unit_k4, 1)


def test_extremity_matches_sampling_oracle():
    # Dense membership scan: a point is extreme iff its smaller removal side
    # is under half the duration; compare against the analytic segments.
    rng = random.Random(11)
    for _ in range(12):
        tree = random_tree(rng, max_nodes=9)
        if len(tree.arcs) > 8:
            continue
        alpha = tree.total_length / 2
        ext = extremity_set(tree, alpha).as_subnetwork(tree)
        for arc in tree.arcs:
            for i in range(1, 1000):
                off = arc.length * i / 1000
                inside = min_side_measure(tree, arc.id, off) < alpha / 2
                covered = any(lo <= off <= hi for lo, hi in ext.segments.get(arc.id, ()))
                if inside:
                    assert covered
                elif covered:
                    # closure adds only boundary offsets
                    assert any(off == lo or off == hi for lo, hi in ext.segments[arc.id])


def test_monotone_in_alpha():
    rng = random.Random(3)
    for _ in range(20):
        tree = random_tree(rng)
        hi = 2 * tree.total_length
        a1 = hi * rng.randint(1, 7) // 16
        a2 = a1 + hi * rng.randint(1, 8) // 16
        if a1 <= 0:
            continue
        e1 = extremity_set(tree, a1).as_subnetwork(tree)
        e2 = extremity_set(tree, min(a2, hi)).as_subnetwork(tree)
        assert e2.contains_sub(e1)


def test_critical_alpha_fixtures(sample_tree):
    assert critical_alpha(sample_tree) == 8
    assert critical_alpha(path_network(4)) == 4
    assert critical_alpha(path_network(F(13, 3))) == F(13, 3)
    assert critical_alpha(star_network([1, 1, 1])) == 2


def test_critical_alpha_threshold_property():
    rng = random.Random(5)
    for _ in range(15):
        tree = random_tree(rng)
        a_star = critical_alpha(tree)
        assert extremity_set(tree, a_star).measure == tree.total_length
        smaller = a_star * F(15, 16)
        if smaller > 0:
            assert extremity_set(tree, smaller).measure < tree.total_length


def test_local_root_fixtures(sample_tree):
    assert local_root_of_tree(sample_tree) == sample_tree.node_point("B")
    path = path_network(4)
    assert local_root_of_tree(path) == path.point("pa0", 2)
    star = star_network([1, 1, 1, 1])
    assert local_root_of_tree(star) == star.node_point("s0")


def test_local_root_component_bound():
    from patrolgame import components_after_removal

    rng = random.Random(13)
    for _ in range(20):
        tree = random_tree(rng)
        x = local_root_of_tree(tree)
        a_star = critical_alpha(tree)
        for comp in components_after_removal(tree, x):
            assert comp.measure <= a_star / 2


def test_local_root_is_core_limit(sample_tree):
    x_star = local_root_of_tree(sample_tree)
    a_star = critical_alpha(sample_tree)
    last = None
    for k in (F(1, 2), F(1, 8), F(1, 64)):
        c = core(sample_tree, a_star - k)
        assert c.contains(x_star)
        if last is not None:
            assert c.measure <= last
        last = c.measure
    assert last <= F(1, 4)


def test_core_fixtures(sample_tree):
    c2 = core(sample_tree, 2)
    assert c2.measure == 5
    for name in ("A", "B", "C"):
        assert c2.contains(sample_tree.node_point(name))
    c8 = core(sample_tree, 8)
    assert c8.measure == 0
    assert c8.contains(sample_tree.node_point("B"))
    path = path_network(4)
    cp = core(path, 2)
    assert seg_set(cp) == {("pa0", F(1), F(3))}


def test_decomposition_fixtures(sample_tree):
    dec4 = subtree_decomposition(sample_tree, 4)
    got = sorted((c.measure, str(c.root)) for c in dec4.components)
    assert got == [(1, "node:A"), (1, "node:C"), (1, "node:C"), (2, "node:A"), (2, "node:B")]
    assert dec4.lambda_e == 7

    dec6 = subtree_decomposition(sample_tree, 6)
    got = sorted((c.measure, str(c.root)) for c in dec6.components)
    assert got == [(1, "node:A"), (2, "node:A"), (2, "node:B"), (3, "arc:bBC:1")]
    assert dec6.lambda_e == 8

    dec8 = subtree_decomposition(sample_tree, 8)
    assert dec8.core.measure == 0
    assert sorted(c.measure for c in dec8.components) == [2, 4, 4]
    assert all(c.root == sample_tree.node_point("B") for c in dec8.components)

    dec2 = subtree_decomposition(sample_tree, 2)
    assert [c.measure for c in dec2.components] == [1, 1, 1, 1, 1]
    roots = sorted(str(c.root) for c in dec2.components)
    assert roots == ["arc:aL62:1", "arc:bL22:1", "node:A", "node:C", "node:C"]


def test_decomposition_at_exact_critical_alpha(sample_tree):
    dec = subtree_decomposition(sample_tree, 8)
    assert dec.core.measure == 0 and len(dec.core.points) == 1


def test_decomposition_invariants_random():
    rng = random.Random(17)
    checked = 0
    while checked < 40:
        tree = random_tree(rng)
        denom = rng.choice([1, 2, 4])
        num = rng.randint(1, int(2 * tree.total_length * denom))
        alpha = F(num, denom)
        if alpha <= 0 or alpha > 2 * tree.total_length:
            continue
        dec = subtree_decomposition(tree, alpha)
        assert dec.core.measure + dec.lambda_e == tree.total_length
        for comp in dec.components:
            assert comp.measure <= alpha / 2
            assert comp.subtree.contains(comp.root)
        # the core never contains a leaf node (single-point core aside)
        if dec.core.measure > 0:
            for leaf in tree.leaf_nodes():
                assert not dec.core.contains(tree.node_point(leaf))
        checked += 1


def test_component_interiors_disjoint(sample_tree):
    for alpha in (2, 4, 6, 8):
        dec = subtree_decomposition(sample_tree, alpha)
        total = sum(c.measure for c in dec.components)
        union = SubNetwork.from_segments(
            sample_tree, [s for c in dec.components for s in c.subtree.segment_list()])
        assert union.measure == total  # no interior overlap between components
