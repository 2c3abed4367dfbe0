"""Interception evaluation and best-response searches.

Exact evaluation works through favorable-phase interval unions in rational
arithmetic.  Continuous spatial attack parts are handled by midpoint-grid
quadrature or Monte Carlo; an exact coverage integral for piecewise-uniform
attacks is deliberately not provided.  Monte Carlo is the only place floating
point appears: trial i consumes a fixed block of a counter-based stream keyed
by the seed, so results are reproducible under any sharding of the trials.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SizeGuardError, ValidationError
from .network import Network, Point, Step, SubNetwork, Walk, frac, walk_through_nodes
from .strategies import AttackStrategy, PatrolStrategy


@dataclass(frozen=True)
class PhaseIntervalSet:
    """Union of disjoint phase intervals modulo a period."""

    period: Fraction
    intervals: tuple[tuple[Fraction, Fraction], ...]

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    @classmethod
    def from_visits(cls, visits: Sequence[Fraction], t, alpha, period) -> "PhaseIntervalSet":
        """Phases for which some visit falls inside [t, t + alpha]."""
        t, alpha, period = frac(t), frac(alpha), frac(period)
        if period <= 0:
            raise ValidationError("period must be positive")
        if not visits:
            return cls(period, ())
        if alpha >= period:
            return cls(period, ((Fraction(0), period),))
        raw = []
        for v in visits:
            lo = (v - t - alpha) % period
            hi = lo + alpha
            if hi <= period:
                raw.append((lo, hi))
            else:
                raw.append((lo, period))
                raw.append((Fraction(0), hi - period))
        raw.sort()
        merged = [list(raw[0])]
        for lo, hi in raw[1:]:
            if lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(period, tuple((lo, hi) for lo, hi in merged))


def periodic_visits(walk: Walk, x: Point) -> tuple[Fraction, ...]:
    """Unique visit times of x within one period, in [0, period)."""
    vis = walk.visit_times(x)
    if walk.is_closed and walk.duration > 0:
        return tuple(sorted({v % walk.duration for v in vis}))
    return vis


def intercept(walk: Walk, x: Point, t, alpha, dwell_at_end: bool = False) -> bool:
    """Whether the walk occupies x at some instant of the closed attack
    window [t, t + alpha].

    Closed walks repeat forever; open walks must cover the window unless
    `dwell_at_end` grants the patrol permission to wait at its final point.
    """
    t, alpha = frac(t), frac(alpha)
    if t < 0:
        raise ValidationError("attack start time must be nonnegative")
    if alpha < 0:
        raise ValidationError("attack duration must be nonnegative")
    if walk.is_stationary:
        return x == walk.start
    if walk.is_closed:
        period = walk.duration
        vis = periodic_visits(walk, x)
        if not vis:
            return False
        if alpha >= period:
            return True
        return any((v - t) % period <= alpha for v in vis)
    if t + alpha > walk.duration and not dwell_at_end:
        raise ValidationError("attack window extends past the end of an open walk")
    if any(t <= v <= t + alpha for v in walk.visit_times(x)):
        return True
    return dwell_at_end and x == walk.end_point and t + alpha >= walk.duration


def interception_probability(patrol: PatrolStrategy, x: Point, t, alpha) -> Fraction:
    """Exact probability that the phase-randomized mixture intercepts an
    attack at x starting at time t.  Uniform phases make the result invariant
    in t; the argument is kept for interface fidelity."""
    t, alpha = frac(t), frac(alpha)
    total = Fraction(0)
    for walk, s in patrol.components:
        if s == 0:
            continue
        if walk.is_stationary:
            total += s if x == walk.start else Fraction(0)
            continue
        vis = periodic_visits(walk, x)
        if not vis:
            continue
        pis = PhaseIntervalSet.from_visits(vis, t, alpha, walk.duration)
        total += s * pis.measure / walk.duration
    return total


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class EvaluationResult:
    probability: object  # Fraction for exact/grid, float for Monte Carlo
    method: str
    trials: int | None = None
    seed: int | None = None
    ci_halfwidth: float | None = None
    notes: str = ""


def _exact_atomic(patrol: PatrolStrategy, attack: AttackStrategy, alpha) -> Fraction:
    t0 = attack.temporal.value if attack.temporal.kind == "fixed" else Fraction(0)
    total = Fraction(0)
    for point, mass in attack.atoms:
        if mass == 0:
            continue
        total += mass * interception_probability(patrol, point, t0, alpha)
    return total


def evaluate(patrol: PatrolStrategy, attack: AttackStrategy, alpha, *,
             method: str = "exact", trials: int = 100_000, seed: int = 0,
             grid_step=Fraction(1, 8), jobs: int = 1) -> EvaluationResult:
    """Probability that the patrol intercepts the attack strategy.

    ``exact`` requires a purely atomic spatial part and falls back to the
    grid quadrature (with a note) otherwise; ``grid`` replaces uniform parts
    by midpoint atoms at the given step and is exact from there on; ``mc``
    runs seeded Monte Carlo and reports a 95% confidence half-width.
    """
    alpha = frac(alpha)
    if method in ("mc", "monte-carlo"):
        return _mc_evaluate(patrol, attack, alpha, trials, seed, jobs)
    if method == "exact":
        if attack.is_atomic:
            return EvaluationResult(_exact_atomic(patrol, attack, alpha), "exact")
        note = "continuous spatial part: exact mode fell back to grid quadrature"
        disc = attack.discretized(grid_step)
        return EvaluationResult(_exact_atomic(patrol, disc, alpha), "grid", notes=note)
    if method == "grid":
        disc = attack.discretized(grid_step)
        return EvaluationResult(_exact_atomic(patrol, disc, alpha), "grid")
    raise ValidationError(f"unknown evaluation method {method!r}")


# -- Monte Carlo ----------------------------------------------------------------

# Uses on trial i: component, phase, spatial pick, offset, start time (5 draws),
# padded to two full Philox counter blocks so trial i always occupies raw words
# [8i, 8i+8) regardless of how trials are sharded across workers.
_DRAWS_PER_TRIAL = 8


def _trial_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    bg = np.random.Philox(key=seed)
    bg.advance(start * _DRAWS_PER_TRIAL // 4)
    raw = bg.random_raw(count * _DRAWS_PER_TRIAL)
    return ((raw >> np.uint64(11)) * 2.0 ** -53).reshape(count, _DRAWS_PER_TRIAL)


def _mc_evaluate(patrol, attack, alpha, trials, seed, jobs) -> EvaluationResult:
    if trials <= 0:
        raise ValidationError("trials must be positive")
    a_f = float(alpha)
    walks = [w for w, _ in patrol.components]
    cum_s = np.cumsum([float(s) for _, s in patrol.components])
    periods = [float(w.duration) for w in walks]

    # flatten the spatial measure: atoms, then per-segment slices of each part
    entries = []  # ("atom", point, None) | ("seg", arc, lo, hi)
    masses = []
    for point, mass in attack.atoms:
        entries.append(("atom", point, None, None))
        masses.append(float(mass))
    for part in attack.uniform_parts:
        d = part.density
        for seg in part.region.segment_list():
            entries.append(("seg", seg.arc, float(seg.lo), float(seg.hi)))
            masses.append(float(d * seg.measure))
    cum_m = np.cumsum(masses)
    cum_m[-1] = 1.0

    fixed_t = attack.temporal.kind == "fixed"
    t_value = float(attack.temporal.value)

    atom_visits = {}
    for i, w in enumerate(walks):
        for j, e in enumerate(entries):
            if e[0] == "atom":
                atom_visits[(i, j)] = np.array([float(v) for v in periodic_visits(w, e[1])])
    arc_steps = {}
    for i, w in enumerate(walks):
        per_arc = {}
        cum = Fraction(0)
        for s in w.steps:
            per_arc.setdefault(s.arc, []).append((float(cum), float(s.start), float(s.end)))
            cum += s.length
        arc_steps[i] = per_arc

    def run_shard(span):
        start, count = span
        u = _trial_uniforms(seed, start, count)
        comp = np.minimum(np.searchsorted(cum_s, u[:, 0], side="right"), len(walks) - 1)
        spot = np.minimum(np.searchsorted(cum_m, u[:, 2], side="right"), len(entries) - 1)
        t = np.full(count, t_value) if fixed_t else u[:, 4] * t_value
        hit = np.zeros(count, dtype=bool)
        for i, w in enumerate(walks):
            sel_i = comp == i
            if not sel_i.any():
                continue
            period = periods[i]
            phase = u[:, 1] * (period if period > 0 else 0.0)
            for j, e in enumerate(entries):
                sel = sel_i & (spot == j)
                if not sel.any():
                    continue
                shift = phase[sel] + t[sel]
                if e[0] == "atom":
                    if period == 0.0:
                        hit[sel] |= e[1] == w.start
                        continue
                    vis = atom_visits[(i, j)]
                    if vis.size == 0:
                        continue
                    rel = np.mod(vis[None, :] - shift[:, None], period)
                    hit[sel] |= (rel <= a_f).any(axis=1)
                else:
                    _, arc, lo, hi = e
                    off = lo + u[sel, 3] * (hi - lo)
                    if period == 0.0:
                        continue  # moving point mass never matches a stationary patrol
                    got = np.zeros(off.shape, dtype=bool)
                    for t0, o1, o2 in arc_steps[i].get(arc, ()):
                        inside = (off >= min(o1, o2)) & (off <= max(o1, o2))
                        v = t0 + np.abs(off - o1)
                        rel = np.mod(v - shift, period)
                        got |= inside & (rel <= a_f)
                    hit[sel] |= got
        return int(hit.sum())

    shard = max(1, -(-trials // max(1, jobs)))
    spans = [(s, min(shard, trials - s)) for s in range(0, trials, shard)]
    if jobs > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            hits = sum(pool.map(run_shard, spans))
    else:
        hits = sum(run_shard(span) for span in spans)
    p_hat = hits / trials
    half = 1.96 * math.sqrt(max(p_hat * (1 - p_hat), 0.0) / trials)
    return EvaluationResult(p_hat, "monte-carlo", trials=trials, seed=seed, ci_halfwidth=half)


# -- best responses -------------------------------------------------------------


@dataclass(frozen=True)
class BestResponse:
    point: Point
    time: Fraction
    probability: Fraction
    space_step: Fraction
    time_step: Fraction | None


def attacker_best_response(patrol: PatrolStrategy, alpha, *, space_step,
                           time_step=None, extra_points: Sequence[Point] = ()) -> BestResponse:
    """Minimize the exact interception probability over a spatial grid
    (all nodes, supplied structural points, and uniform subdivisions) and an
    optional time grid over one period."""
    alpha = frac(alpha)
    net = patrol.network
    grid = SubNetwork.whole(net).grid_points(space_step, extra=extra_points)
    if time_step is None:
        times = [Fraction(0)]
    else:
        h = frac(time_step)
        horizon = max(w.duration for w, _ in patrol.components)
        times = []
        t = Fraction(0)
        while t < horizon:
            times.append(t)
            t += h
        if not times:
            times = [Fraction(0)]
    best = None
    for x in grid:
        comps = []
        for w, s in patrol.components:
            if w.is_stationary:
                comps.append((s, None, None, x == w.start))
            else:
                comps.append((s, periodic_visits(w, x), w.duration, None))
        for t in times:
            prob = Fraction(0)
            for s, vis, period, stat_hit in comps:
                if stat_hit is not None:
                    prob += s if stat_hit else Fraction(0)
                elif vis:
                    prob += s * PhaseIntervalSet.from_visits(vis, t, alpha, period).measure / period
            if best is None or prob < best[0]:
                best = (prob, x, t)
    prob, x, t = best
    return BestResponse(x, t, prob, frac(space_step), None if time_step is None else frac(time_step))


# -- patrol families and search ---------------------------------------------------


def greedy_coverage_walk(net: Network, start: str | None = None, seed: int = 0) -> Walk:
    """Closed walk built by always taking the least recently traversed arc;
    an adversarial probe, not an optimal patrol."""
    rng = random.Random(seed)
    nodes = list(net.nodes)
    node = start if start is not None else rng.choice(nodes)
    origin = node
    last: dict[str, int] = {}
    seq = [node]
    elapsed = Fraction(0)
    budget = 4 * net.total_length
    step_no = 0
    while True:
        arcs = [a for a in net.incident(node) if a.u != a.v]
        arc = min(arcs, key=lambda a: (last.get(a.id, -1), a.id))
        step_no += 1
        last[arc.id] = step_no
        node = arc.other(node)
        seq.append(node)
        elapsed += arc.length
        if node == origin and len(last) == len([a for a in net.arcs if a.u != a.v]):
            break
        if elapsed > budget:
            seq.extend(net.node_path(node, origin)[1:])
            break
    return walk_through_nodes(net, seq)


def random_closed_walk(net: Network, rng: random.Random, max_steps: int = 20) -> Walk:
    """Random node walk closed by a shortest path back to its origin."""
    node = rng.choice(list(net.nodes))
    seq = [node]
    for _ in range(rng.randint(2, max_steps)):
        arcs = [a for a in net.incident(node) if a.u != a.v]
        arc = rng.choice(arcs)
        node = arc.other(node)
        seq.append(node)
    if node != seq[0]:
        seq.extend(net.node_path(node, seq[0])[1:])
    return walk_through_nodes(net, seq)


def _lcm(nums):
    out = 1
    for n in nums:
        out = out * n // math.gcd(out, n)
    return out


@dataclass(frozen=True)
class SearchResult:
    walk: Walk
    probability: Fraction
    walks_examined: int


def patrol_search(net: Network, attack: AttackStrategy, alpha, *, max_steps: int = 8,
                  offset_step=Fraction(1, 4), grid_step=Fraction(1, 4),
                  max_walks: int = 2_000_000) -> SearchResult:
    """Exhaustive best patrol among unit-speed node-waypoint walks.

    Walks start at a node, or at an interior grid offset heading for an
    endpoint, then take up to `max_steps` full arc steps; on finishing a walk
    the patrol waits at its final position.  Each candidate (including every
    prefix) is scored exactly against the grid-discretized attack.  Arithmetic
    runs on a common integer scale for speed; results are exact rationals.
    """
    alpha = frac(alpha)
    offset_step = frac(offset_step)
    disc = attack.discretized(grid_step)
    fixed_t = disc.temporal.kind == "fixed"
    horizon = disc.temporal.value if not fixed_t else Fraction(0)
    t_fix = disc.temporal.value if fixed_t else Fraction(0)

    denoms = [alpha.denominator, offset_step.denominator,
              horizon.denominator, t_fix.denominator]
    denoms += [a.length.denominator for a in net.arcs]
    denoms += [p.offset.denominator for p, _ in disc.atoms if not p.is_node]
    scale = _lcm(denoms)

    def s(x: Fraction) -> int:
        return int(x * scale)

    alpha_i, horizon_i, tfix_i = s(alpha), s(horizon), s(t_fix)
    arc_len = {a.id: s(a.length) for a in net.arcs}

    atoms = []  # (point, mass, arc or None, scaled offset or node key)
    by_arc: dict[str, list[int]] = {}
    node_atoms: dict[str, int] = {}
    for idx, (p, m) in enumerate(disc.atoms):
        if p.is_node:
            atoms.append((p, m, None, p.node))
            node_atoms[p.node] = idx
        else:
            atoms.append((p, m, p.arc, s(p.offset)))
            by_arc.setdefault(p.arc, []).append(idx)

    visits: list[list[int]] = [[] for _ in atoms]

    def favorable(idx: int, dwell_here: bool, now: int) -> Fraction:
        vs = visits[idx]
        if fixed_t:
            lo, hi = tfix_i, tfix_i + alpha_i
            hit = any(lo <= v <= hi for v in vs) or (dwell_here and hi >= now)
            return Fraction(1) if hit else Fraction(0)
        raw = []
        for v in vs:
            lo = max(0, v - alpha_i)
            hi = min(horizon_i, v)
            if lo <= hi:
                raw.append((lo, hi))
        if dwell_here:
            lo = max(0, now - alpha_i)
            if lo <= horizon_i:
                raw.append((lo, horizon_i))
        if not raw:
            return Fraction(0)
        raw.sort()
        total = 0
        cur_lo, cur_hi = raw[0]
        for lo, hi in raw[1:]:
            if lo <= cur_hi:
                cur_hi = max(cur_hi, hi)
            else:
                total += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
        total += cur_hi - cur_lo
        return Fraction(total, horizon_i)

    best = {"value": None, "spec": None, "count": 0}

    def score(now: int, dwell_atom: int | None, spec):
        value = Fraction(0)
        for idx, (_, mass, _, _) in enumerate(atoms):
            value += mass * favorable(idx, idx == dwell_atom, now)
        if best["value"] is None or value > best["value"]:
            best["value"] = value
            best["spec"] = spec
        best["count"] += 1
        if best["count"] > max_walks:
            raise SizeGuardError(f"patrol family exceeded {max_walks} walks")

    def arc_hits(arc_id: str, entry: int, exit_: int, now: int) -> list[tuple[int, int]]:
        out = []
        lo, hi = min(entry, exit_), max(entry, exit_)
        for idx in by_arc.get(arc_id, ()):
            off = atoms[idx][3]
            if lo <= off <= hi:
                out.append((idx, now + abs(off - entry)))
        return out

    def extend(node: str, now: int, depth: int, trail: tuple):
        score(now, node_atoms.get(node), trail)
        if depth == max_steps:
            return
        for a in net.incident(node):
            if a.u == a.v:
                continue
            entry = 0 if a.u == node else arc_len[a.id]
            exit_ = arc_len[a.id] - entry
            hits = arc_hits(a.id, entry, exit_, now)
            other = a.other(node)
            if other in node_atoms:
                hits.append((node_atoms[other], now + arc_len[a.id]))
            for idx, v in hits:
                visits[idx].append(v)
            extend(other, now + arc_len[a.id], depth + 1, trail + ((a.id, entry, exit_),))
            for idx, _ in hits:
                visits[idx].pop()

    # node starts
    for name in net.nodes:
        if name in node_atoms:
            visits[node_atoms[name]].append(0)
        extend(name, 0, 0, (("start-node", name),))
        if name in node_atoms:
            visits[node_atoms[name]].pop()

    # interior starts on the offset grid, one per direction
    for a in net.arcs:
        if a.u == a.v:
            continue
        step_i = s(offset_step)
        for off in range(step_i, arc_len[a.id], step_i):
            for target in (a.u, a.v):
                entry = off
                exit_ = 0 if target == a.u else arc_len[a.id]
                hits = arc_hits(a.id, entry, exit_, 0)
                if target in node_atoms:
                    hits.append((node_atoms[target], abs(exit_ - entry)))
                for idx, v in hits:
                    visits[idx].append(v)
                start_spec = (("start-arc", a.id, off, target),)
                extend(target, abs(exit_ - entry), 0, start_spec)
                for idx, _ in hits:
                    visits[idx].pop()

    spec = best["spec"]
    walk = _walk_from_spec(net, spec, scale)
    return SearchResult(walk, best["value"], best["count"])


def _walk_from_spec(net: Network, spec, scale: int) -> Walk:
    head, rest = spec[0], spec[1:]
    steps = []
    if head[0] == "start-node":
        start = net.node_point(head[1])
    else:
        _, arc_id, off, target = head
        a = net.arc(arc_id)
        off_f = Fraction(off, scale)
        start = net.point(arc_id, off_f)
        end_off = Fraction(0) if target == a.u else a.length
        steps.append(Step(arc_id, off_f, end_off))
    for arc_id, entry, exit_ in rest:
        steps.append(Step(arc_id, Fraction(entry, scale), Fraction(exit_, scale)))
    return Walk(net, start, steps)


def walk_attack_probability(walk: Walk, attack: AttackStrategy, alpha, *,
                            grid_step=Fraction(1, 4), dwell_at_end: bool = True) -> Fraction:
    """Exact interception probability of a single deterministic walk against
    a (grid-discretized) attack; the patrol waits at its final position after
    the walk ends when `dwell_at_end` is set."""
    alpha = frac(alpha)
    disc = attack if attack.is_atomic else attack.discretized(grid_step)
    total = Fraction(0)
    if disc.temporal.kind == "fixed":
        t0 = disc.temporal.value
        for p, m in disc.atoms:
            if m and intercept(walk, p, t0, alpha, dwell_at_end=dwell_at_end):
                total += m
        return total
    horizon = disc.temporal.value
    for p, m in disc.atoms:
        if m == 0:
            continue
        raw = []
        for v in walk.visit_times(p):
            lo = max(Fraction(0), v - alpha)
            hi = min(horizon, v)
            if lo <= hi:
                raw.append((lo, hi))
        if dwell_at_end and not walk.is_closed and p == walk.end_point:
            lo = max(Fraction(0), walk.duration - alpha)
            if lo <= horizon:
                raw.append((lo, horizon))
        if walk.is_stationary and p == walk.start:
            raw.append((Fraction(0), horizon))
        if walk.is_closed and not walk.is_stationary:
            period = walk.duration
            reps = int((horizon + alpha) // period) + 1
            for k in range(1, reps + 1):
                for v in periodic_visits(walk, p):
                    vv = v + k * period
                    lo = max(Fraction(0), vv - alpha)
                    hi = min(horizon, vv)
                    if lo <= hi:
                        raw.append((lo, hi))
        if not raw:
            continue
        raw.sort()
        measure = Fraction(0)
        cur_lo, cur_hi = raw[0]
        for lo, hi in raw[1:]:
            if lo <= cur_hi:
                cur_hi = max(cur_hi, hi)
            else:
                measure += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
        measure += cur_hi - cur_lo
        total += m * measure / horizon
    return total
