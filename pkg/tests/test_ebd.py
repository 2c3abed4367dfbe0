import random
from fractions import Fraction

import pytest

from patrolgame import (
    LeafDistribution,
    RootedSubtree,
    SubNetwork,
    ValidationError,
    density,
    ebd,
    path_network,
    subtree_above,
    subtree_decomposition,
    tree_attack_strategy,
    uniform_attack,
    TemporalLaw,
)
from patrolgame.ebd import branch_stats, iter_cut_subtree_stats
from conftest import random_tree

F = Fraction

CUT_GRID = (F(1, 2),)  # interiors are linear in the cut, so extremes plus one
                       # midpoint bound the whole continuum of cut subtrees


def rooted_whole(tree, root_name):
    return RootedSubtree(SubNetwork.whole(tree), tree.node_point(root_name))


def test_ebd_single_path():
    path = path_network(3, pieces=3)
    dist = ebd(rooted_whole(path, "p0"), F(2, 3))
    assert dist.atoms == ((path.node_point("p3"), F(2, 3)),)


def test_ebd_sample_tree_west_component(sample_tree):
    dec = subtree_decomposition(sample_tree, 8)
    west = next(c for c in dec.components if c.measure == 4 and
                c.subtree.contains(sample_tree.node_point("L5")))
    dist = ebd(RootedSubtree(west.subtree, west.root), F(8, 20))
    masses = {str(p): m for p, m in dist.atoms}
    assert masses == {"node:L5": F(8, 60), "node:L62": F(16, 60)}


def test_ebd_sample_tree_east_component(sample_tree):
    dec = subtree_decomposition(sample_tree, 8)
    east = next(c for c in dec.components if c.subtree.contains(sample_tree.node_point("L3")))
    dist = ebd(RootedSubtree(east.subtree, east.root), F(8, 20))
    masses = {str(p): m for p, m in dist.atoms}
    assert masses == {"node:L3": F(4, 20), "node:L4": F(4, 20)}


def test_ebd_conservation_and_support():
    rng = random.Random(23)
    for _ in range(30):
        tree = random_tree(rng, min_nodes=3)
        root = rng.choice(tree.nodes)
        mass = F(rng.randint(1, 9), rng.randint(1, 9))
        dist = ebd(rooted_whole(tree, root), mass)
        assert dist.total == mass
        assert sum(m for _, m in dist.atoms) == mass
        leaves = {tree.node_point(l) for l in tree.leaf_nodes()}
        assert all(p in leaves and p != tree.node_point(root) for p, _ in dist.atoms)


def test_ebd_branch_densities_equal():
    rng = random.Random(29)
    for _ in range(20):
        tree = random_tree(rng, min_nodes=4)
        root = rng.choice(tree.nodes)
        rooted = rooted_whole(tree, root)
        dist = ebd(rooted, 1)
        for _, stats in branch_stats(rooted, dist):
            densities = {m / lam for lam, m in stats}
            assert len(densities) == 1


def test_ebd_degenerate_root_rejected():
    path = path_network(1)
    lone = SubNetwork.single_point(path, path.node_point("p0"))
    with pytest.raises(ValidationError):
        ebd(RootedSubtree(lone, path.node_point("p0")), 1)


def test_density_fixtures(sample_tree):
    zone = SubNetwork.from_segments(
        sample_tree, [s for s in SubNetwork.whole(sample_tree).segment_list()
                      if s.arc in ("aL62", "bL22")])
    att = uniform_attack(zone, TemporalLaw.fixed(0))
    assert density(att, zone) == F(1, 4)

    attack4 = tree_attack_strategy(sample_tree, 4)
    l62 = SubNetwork.from_segments(sample_tree, [
        s for s in SubNetwork.whole(sample_tree).segment_list() if s.arc == "aL62"])
    assert density(attack4, l62) == F(2, 17)

    atom = LeafDistribution(((sample_tree.node_point("L3"), F(3, 5)),), F(3, 5))
    branch = SubNetwork.from_segments(sample_tree, [
        s for s in SubNetwork.whole(sample_tree).segment_list() if s.arc == "cL3"])
    assert density(atom, branch) == F(3, 5)


def test_density_rejects_zero_measure(sample_tree):
    att = tree_attack_strategy(sample_tree, 4)
    point = SubNetwork.single_point(sample_tree, sample_tree.node_point("B"))
    with pytest.raises(ValidationError):
        density(att, point)


def test_subtree_above(sample_tree):
    root = sample_tree.node_point("B")
    qx = subtree_above(sample_tree, root, sample_tree.node_point("A"))
    assert qx.subtree.measure == 3
    assert qx.root == sample_tree.node_point("A")
    qc = subtree_above(sample_tree, root, sample_tree.point("bBC", 1))
    assert qc.subtree.measure == 3


def test_cut_subtree_density_bound_small():
    # every grid-cut subtree Z above x satisfies mass(Z)/len(Z) <= mass(Qx)/len(Qx)
    rng = random.Random(31)
    for _ in range(15):
        tree = random_tree(rng, min_nodes=4)
        root_name = rng.choice(tree.nodes)
        rooted = rooted_whole(tree, root_name)
        dist = ebd(rooted, 1)
        others = [n for n in tree.nodes
                  if n != root_name and tree.degree(n) > 1]
        if not others:
            continue
        x = tree.node_point(rng.choice(others))
        qx = subtree_above(tree, rooted.root, x)
        mass_qx = dist.mass_on(qx.subtree)
        lam_qx = qx.subtree.measure
        for lam, m in iter_cut_subtree_stats(qx, dist, CUT_GRID):
            assert m * lam_qx <= mass_qx * lam
