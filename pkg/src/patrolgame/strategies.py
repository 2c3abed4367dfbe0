"""Attacker and Patroller strategies and the associated game values.

Attack strategies combine an exact spatial measure (leaf atoms plus
piecewise-uniform parts) with a start-time law; patrol strategies are finite
mixtures of periodic unit-speed closed walks, each played with a uniformly
random phase.  Strategy objects are immutable; sampling always goes through
an explicit random stream supplied by the caller (see the game engine).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decomposition import TreeComponent, extremity_set, subtree_decomposition
from .ebd import RootedSubtree, ebd
from .errors import FactorizationError, ValidationError
from .factorization import Factorization, round_robin_one_factorization, validate_factorization
from .network import (
    Network,
    Point,
    Step,
    SubNetwork,
    Walk,
    double_traversal,
    eulerian_tour,
    frac,
    validate_alpha,
)


@dataclass(frozen=True)
class TemporalLaw:
    """Start-time law: a fixed instant or uniform over [0, horizon]."""

    kind: str
    value: Fraction

    @classmethod
    def fixed(cls, t) -> "TemporalLaw":
        return cls("fixed", frac(t))

    @classmethod
    def uniform(cls, horizon) -> "TemporalLaw":
        h = frac(horizon)
        if h < 0:
            raise ValidationError("horizon must be nonnegative")
        if h == 0:
            return cls.fixed(0)
        return cls("uniform", h)


@dataclass(frozen=True)
class UniformPart:
    """Constant-density spatial mass spread over a subnetwork."""

    region: SubNetwork
    mass: Fraction

    @property
    def density(self) -> Fraction:
        return self.mass / self.region.measure


@dataclass(frozen=True)
class AttackStrategy:
    network: Network
    atoms: tuple[tuple[Point, Fraction], ...]
    uniform_parts: tuple[UniformPart, ...]
    temporal: TemporalLaw

    def __post_init__(self):
        total = self.total_mass
        if total != 1:
            raise ValidationError(f"attack masses sum to {total}, expected 1")
        if any(m < 0 for _, m in self.atoms) or any(p.mass < 0 for p in self.uniform_parts):
            raise ValidationError("negative attack mass")

    @property
    def total_mass(self) -> Fraction:
        return (sum((m for _, m in self.atoms), Fraction(0))
                + sum((p.mass for p in self.uniform_parts), Fraction(0)))

    @property
    def is_atomic(self) -> bool:
        return not self.uniform_parts

    def mass_on(self, sub: SubNetwork) -> Fraction:
        """Exact spatial mass of a subnetwork under this strategy."""
        total = sum((m for p, m in self.atoms if sub.contains(p)), Fraction(0))
        for part in self.uniform_parts:
            total += part.density * part.region.overlap_measure(sub)
        return total

    def discretized(self, step) -> "AttackStrategy":
        """Atomic approximation: each uniform part becomes midpoint atoms on
        cells no wider than `step`.  Exact masses, approximate positions."""
        h = frac(step)
        if h <= 0:
            raise ValidationError("grid step must be positive")
        atoms: dict[Point, Fraction] = {}
        for p, m in self.atoms:
            atoms[p] = atoms.get(p, Fraction(0)) + m
        for part in self.uniform_parts:
            for seg in part.region.segment_list():
                cells = max(1, -(seg.measure // -h))  # ceil division
                width = seg.measure / cells
                for i in range(cells):
                    mid = seg.lo + width * i + width / 2
                    p = self.network.point(seg.arc, mid)
                    atoms[p] = atoms.get(p, Fraction(0)) + part.density * width
        ordered = tuple(sorted(atoms.items(), key=lambda kv: kv[0].sort_key()))
        return AttackStrategy(self.network, ordered, (), self.temporal)


@dataclass(frozen=True)
class PatrolStrategy:
    """Mixture of periodic closed walks, each with uniform random phase."""

    network: Network
    components: tuple[tuple[Walk, Fraction], ...]

    def __post_init__(self):
        if not self.components:
            raise ValidationError("patrol strategy needs at least one walk")
        total = sum((s for _, s in self.components), Fraction(0))
        if total != 1:
            raise ValidationError(f"selection probabilities sum to {total}, expected 1")
        for w, s in self.components:
            if s < 0:
                raise ValidationError("negative selection probability")
            if not w.is_closed:
                raise ValidationError("patrol walks must be closed")

    @classmethod
    def single(cls, walk: Walk) -> "PatrolStrategy":
        return cls(walk.net, ((walk, Fraction(1)),))


@dataclass(frozen=True)
class GameConfig:
    """Attack duration, optimality slack and the induced time horizon."""

    alpha: Fraction
    epsilon: Fraction = Fraction(1, 20)
    horizon: Fraction | None = None

    def resolved_horizon(self) -> Fraction:
        if self.horizon is not None:
            return self.horizon
        return epsilon_horizon(self.alpha, self.epsilon)


# -- values -------------------------------------------------------------------


def epsilon_horizon(alpha, epsilon) -> Fraction:
    """Randomizing the start time over [0, 3*alpha/epsilon] costs the
    Attacker at most epsilon of guarantee."""
    a, e = frac(alpha), frac(epsilon)
    if e <= 0:
        raise ValidationError("epsilon must be positive")
    return 3 * a / e

def game_value_tree(tree: Network, alpha) -> Fraction:
    """Value of the game on a tree: alpha / (mu + lambda(E))."""
    a = validate_alpha(tree, alpha)
    ext = extremity_set(tree, a)
    return a / (tree.total_length + ext.measure)


def value_complete(net: Network, factorization: Factorization, alpha) -> Fraction:
    """Value alpha/mu on a complete network, valid while the attack duration
    stays within mu minus the largest factor length; refuses beyond."""
    a = frac(alpha)
    if a <= 0:
        raise ValidationError("attack duration must be positive")
    mu = net.total_length
    bound = mu - factorization.delta
    if a > bound:
        raise ValidationError(
            f"value formula validated only for duration <= {bound}; got {a}")
    return a / mu


# -- attacker strategies -------------------------------------------------------


def uniform_attack(zone, temporal: TemporalLaw) -> AttackStrategy:
    """Attack at a uniformly random point of a connected zone."""
    if isinstance(zone, Network):
        zone = SubNetwork.whole(zone)
    if zone.measure <= 0:
        raise ValidationError("uniform attack needs a positive-measure zone")
    part = UniformPart(zone, Fraction(1))
    return AttackStrategy(zone.host, (), (part,), temporal)


def tree_attack_strategy(tree: Network, alpha, horizon=None, epsilon=None) -> AttackStrategy:
    """Attack mixing a uniform core point with leaf atoms on each extremity
    component, started uniformly in [0, T].

    The core carries its own length share of the total mass; each extremity
    component carries twice its length share, spread over its leaves with
    equal branch density.  The shares sum to one exactly.
    """
    a = validate_alpha(tree, alpha)
    if horizon is not None:
        T = frac(horizon)
    else:
        T = epsilon_horizon(a, epsilon if epsilon is not None else Fraction(1, 20))
    if T <= 0:
        raise ValidationError("horizon must be positive")
    dec = subtree_decomposition(tree, a)
    denom = tree.total_length + dec.lambda_e
    atoms: dict[Point, Fraction] = {}
    for comp in dec.components:
        mass = 2 * comp.measure / denom
        dist = ebd(RootedSubtree(comp.subtree, comp.root), mass)
        for p, m in dist.atoms:
            atoms[p] = atoms.get(p, Fraction(0)) + m
    parts = ()
    core_mass = dec.core.measure / denom
    if core_mass > 0:
        parts = (UniformPart(dec.core, core_mass),)
    ordered = tuple(sorted(atoms.items(), key=lambda kv: kv[0].sort_key()))
    return AttackStrategy(tree, ordered, parts, TemporalLaw.uniform(T))


def k4_tightness_attack(net: Network | None = None, alpha=5) -> AttackStrategy:
    """Uniform attack on the unit complete 4-node network with start time
    uniform on [0, 6 - alpha]; defined for durations in (4, 6]."""
    from .network import complete_network

    a = frac(alpha)
    if not (4 < a <= 6):
        raise ValidationError("tightness attack defined for durations in (4, 6]")
    if net is None:
        net = complete_network(4)
    if len(net.nodes) != 4 or not net.is_simple or len(net.arcs) != 6 or any(
            arc.length != 1 for arc in net.arcs):
        raise ValidationError("network must be the unit complete 4-node network")
    return uniform_attack(net, TemporalLaw.uniform(6 - a))


# -- patroller strategies -------------------------------------------------------


def _component_tour_steps(tree: Network, comp: TreeComponent) -> list[Step]:
    """One closed double traversal of a component from its root, as host steps."""
    mat = comp.subtree.materialize()
    root_name = mat.host_point_name(comp.root)
    tour = double_traversal(mat.net, root_name)
    return list(mat.translate_walk(tour, tree).steps)


def e_patrolling(tree: Network, alpha) -> PatrolStrategy:
    """Periodic patrol doubling coverage of the extremity components.

    One period double-traverses the core once and tours every extremity
    component exactly twice, giving period 2*(mu + lambda(E)).  The two tours
    of a component are placed so they sit at least an attack duration apart
    around the cycle: components hanging at an interior core point are toured
    once at each of its first two core arrivals, while components at a core
    leaf are toured in two consecutive round-robin passes (their combined
    hanging measure is at least half the attack duration, which separates the
    repeats enough).  Every point is then occupied twice per period with both
    gaps effectively at least the attack duration, so a uniform random phase
    intercepts any fixed attack with probability at least
    alpha / (mu + lambda(E)).  The mixture adds a fair random orientation.
    """
    a = validate_alpha(tree, alpha)
    dec = subtree_decomposition(tree, a)
    by_root: dict[Point, list[TreeComponent]] = {}
    for c in dec.components:
        by_root.setdefault(c.root, []).append(c)
    blocks = {root: [s for c in comps for s in _component_tour_steps(tree, c)]
              for root, comps in by_root.items()}

    if dec.core.measure == 0:
        x_star = next(iter(dec.core.points))
        steps = blocks[x_star] * 2
        walk = Walk(tree, x_star, steps)
    else:
        mat = dec.core.materialize()
        cnet = mat.net
        root_names = {mat.host_point_name(root): root for root in blocks}
        host_named = [n for n in cnet.nodes if mat.node_to_host[n].is_node]
        start_name = min(host_named) if host_named else min(cnet.nodes)
        steps: list[Step] = []
        arrivals: dict[str, int] = {}

        def arrive(name: str):
            root = root_names.get(name)
            if root is None:
                return
            arrivals[name] = arrivals.get(name, 0) + 1
            k = arrivals[name]
            if len(cnet.incident(name)) >= 2:
                if k <= 2:
                    steps.extend(blocks[root])
            elif k == 1:
                steps.extend(blocks[root])
                steps.extend(blocks[root])

        def host_step(arc, forward: bool) -> Step:
            harc, lo = mat.arc_to_host[arc.id]
            if forward:
                return Step(harc, lo, lo + arc.length)
            return Step(harc, lo + arc.length, lo)

        def visit(name: str, came: str | None):
            arrive(name)
            for arc in cnet.incident(name):
                if arc.id == came:
                    continue
                steps.append(host_step(arc, arc.u == name))
                visit(arc.other(name), arc.id)
                steps.append(host_step(arc, arc.u != name))
                arrive(name)

        visit(start_name, None)
        walk = Walk(tree, mat.node_to_host[start_name], steps)

    expected = 2 * (tree.total_length + dec.lambda_e)
    assert walk.duration == expected and walk.is_closed
    half = Fraction(1, 2)
    return PatrolStrategy(tree, ((walk, half), (walk.reversed(), half)))


def _require_complete_even(net: Network):
    n = len(net.nodes)
    if n < 4 or n % 2 != 0:
        raise ValidationError("complete-network patrolling needs an even node count of at least 4")
    if not net.is_simple or len(net.arcs) != n * (n - 1) // 2:
        raise ValidationError("network is not simple complete")


def complete_patrolling(net: Network, factorization: Factorization | None = None) -> PatrolStrategy:
    """Mixture of Eulerian tours of the complements of the factors of a
    1-factorization, each weighted by its share of the total tour length."""
    _require_complete_even(net)
    if factorization is None:
        factorization = round_robin_one_factorization(net)
    violations = validate_factorization(net, factorization.factors, 1)
    if violations:
        raise FactorizationError(violations)
    n = len(net.nodes)
    mu = net.total_length
    comps = []
    for i in range(len(factorization.factors)):
        qi = factorization.complement(i)
        s_i = qi.total_length / ((n - 2) * mu)
        tour = eulerian_tour(qi)
        comps.append((Walk(net, tour.start, tour.steps), s_i))
    total = sum((s for _, s in comps), Fraction(0))
    assert total == 1
    return PatrolStrategy(net, tuple(comps))


def factor_patrolling(net: Network, factorization: Factorization) -> PatrolStrategy:
    """Generalization to odd-k-regular networks with an m-factorization.

    Requires k odd, m odd, k >= n + m on 2n nodes; every complement must
    come out connected and Eulerian.  All violated hypotheses are reported
    together rather than one at a time.
    """
    violations = []
    n2 = len(net.nodes)
    if n2 % 2 != 0 or n2 < 4:
        violations.append(f"node count {n2} is not an even number >= 4")
    if not net.is_simple:
        violations.append("network is not simple")
    degrees = {net.degree(v) for v in net.nodes}
    if len(degrees) != 1:
        violations.append(f"network is not regular (degrees {sorted(degrees)})")
        k = None
    else:
        k = degrees.pop()
        if k % 2 == 0:
            violations.append(f"degree {k} is even")
    m = factorization.regularity
    if m % 2 == 0:
        violations.append(f"factor regularity {m} is even")
    if k is not None and n2 % 2 == 0 and k < n2 // 2 + m:
        violations.append(f"need degree >= n + m = {n2 // 2 + m}, got {k}")
    violations += validate_factorization(net, factorization.factors, m)
    complements = []
    if not violations:
        for i in range(len(factorization.factors)):
            try:
                qi = factorization.complement(i)
            except ValidationError:
                violations.append(f"complement of factor {i + 1} is disconnected")
                continue
            if not qi.is_eulerian():
                violations.append(f"complement of factor {i + 1} is not Eulerian")
            else:
                complements.append(qi)
    if violations:
        raise FactorizationError(violations)
    total = sum((q.total_length for q in complements), Fraction(0))
    comps = []
    for qi in complements:
        tour = eulerian_tour(qi)
        comps.append((Walk(net, tour.start, tour.steps), qi.total_length / total))
    return PatrolStrategy(net, tuple(comps))
