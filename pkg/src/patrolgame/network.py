"""Metric multigraph networks, points on arcs, and unit-speed walks.

All lengths, offsets and probabilities are exact `fractions.Fraction`
values; floating point never enters this module.  Networks are immutable
after construction and every operation here is pure, so concurrent reads
need no synchronization.
"""

from __future__ import annotations

import heapq
import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FormatError, ValidationError

FractionLike = "Fraction | int | str"


def frac(x) -> Fraction:
    """Coerce an int, Fraction, 'p/q' or decimal string to an exact Fraction.

    Floats are rejected: binary floats silently break the exact-equality
    contract, so callers must pass strings or Fractions instead.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}; pass a Fraction or string")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class Arc:
    """Undirected arc of positive rational length. Loops (u == v) are allowed."""

    id: str
    u: str
    v: str
    length: Fraction

    def other(self, node: str) -> str:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise ValidationError(f"node {node!r} is not an endpoint of arc {self.id!r}")

    def endpoint_at(self, offset: Fraction) -> str | None:
        if offset == 0:
            return self.u
        if offset == self.length:
            return self.v
        return None


@dataclass(frozen=True)
class Point:
    """A location on a network: either a node or an interior arc position.

    Interior offsets are measured from the arc's `u` endpoint and satisfy
    0 < offset < length; offsets 0/length are normalized to the node form
    so equality of points is canonical.  Build points through
    :meth:`Network.point` or :meth:`Network.node_point`.
    """

    node: str | None = None
    arc: str | None = None
    offset: Fraction | None = None

    @property
    def is_node(self) -> bool:
        return self.node is not None

    def sort_key(self):
        if self.is_node:
            return (0, self.node, "", Fraction(0))
        return (1, "", self.arc, self.offset)

    def __repr__(self):
        if self.is_node:
            return f"node:{self.node}"
        return f"arc:{self.arc}:{self.offset}"


@dataclass(frozen=True)
class Segment:
    """A closed sub-interval [lo, hi] of an arc with positive measure."""

    arc: str
    lo: Fraction
    hi: Fraction

    @property
    def measure(self) -> Fraction:
        return self.hi - self.lo

    def __repr__(self):
        return f"seg:{self.arc}:{self.lo}:{self.hi}"


class Network:
    """Connected metric multigraph with positive rational arc lengths."""

    def __init__(self, nodes: Iterable[str], arcs: Iterable[tuple]):
        self.nodes: tuple[str, ...] = tuple(sorted(set(nodes)))
        if not self.nodes:
            raise ValidationError("network has no nodes")
        built = []
        seen = set()
        node_set = set(self.nodes)
        for aid, u, v, length in arcs:
            if aid in seen:
                raise ValidationError(f"duplicate arc id {aid!r}")
            seen.add(aid)
            if u not in node_set or v not in node_set:
                raise ValidationError(f"arc {aid!r} references unknown node")
            ln = frac(length)
            if ln <= 0:
                raise ValidationError(f"arc {aid!r} has nonpositive length {ln}")
            built.append(Arc(str(aid), str(u), str(v), ln))
        self.arcs: tuple[Arc, ...] = tuple(sorted(built, key=lambda a: a.id))
        if not self.arcs:
            raise ValidationError("network has no arcs")
        self._arc_by_id = {a.id: a for a in self.arcs}
        incident: dict[str, list[Arc]] = {n: [] for n in self.nodes}
        for a in self.arcs:
            incident[a.u].append(a)
            if a.v != a.u:
                incident[a.v].append(a)
        self._incident = {n: tuple(sorted(v, key=lambda a: a.id)) for n, v in incident.items()}
        self._dist_cache: dict[str, dict[str, Fraction]] = {}
        if not self._connected():
            raise ValidationError("network is disconnected")

    # -- basic structure ---------------------------------------------------

    def _connected(self) -> bool:
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            n = stack.pop()
            for a in self._incident[n]:
                m = a.other(n)
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(self.nodes)

    def arc(self, arc_id: str) -> Arc:
        try:
            return self._arc_by_id[arc_id]
        except KeyError:
            raise ValidationError(f"unknown arc {arc_id!r}") from None

    def incident(self, node: str) -> tuple[Arc, ...]:
        try:
            return self._incident[node]
        except KeyError:
            raise ValidationError(f"unknown node {node!r}") from None

    def degree(self, node: str) -> int:
        return sum(2 if a.u == a.v else 1 for a in self.incident(node))

    @property
    def total_length(self) -> Fraction:
        return sum((a.length for a in self.arcs), Fraction(0))

    @property
    def is_simple(self) -> bool:
        pairs = set()
        for a in self.arcs:
            if a.u == a.v:
                return False
            key = (min(a.u, a.v), max(a.u, a.v))
            if key in pairs:
                return False
            pairs.add(key)
        return True

    def is_tree(self) -> bool:
        return len(self.arcs) == len(self.nodes) - 1

    def leaf_nodes(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if self.degree(n) == 1)

    def is_eulerian(self) -> bool:
        return all(self.degree(n) % 2 == 0 for n in self.nodes)

    def without_arcs(self, arc_ids: Iterable[str]) -> "Network":
        """Network on the same nodes minus the given arcs; must stay connected."""
        drop = set(arc_ids)
        keep = [(a.id, a.u, a.v, a.length) for a in self.arcs if a.id not in drop]
        return Network(self.nodes, keep)

    # -- points ------------------------------------------------------------

    def node_point(self, name: str) -> Point:
        if name not in self._incident:
            raise ValidationError(f"unknown node {name!r}")
        return Point(node=name)

    def point(self, arc_id: str, offset) -> Point:
        """Point at `offset` from the arc's u endpoint, normalized to a node
        when the offset hits either end."""
        a = self.arc(arc_id)
        off = frac(offset)
        if off < 0 or off > a.length:
            raise ValidationError(f"offset {off} outside arc {arc_id!r} of length {a.length}")
        end = a.endpoint_at(off)
        if end is not None:
            return Point(node=end)
        return Point(arc=arc_id, offset=off)

    def contains_point(self, p: Point) -> bool:
        if p.is_node:
            return p.node in self._incident
        return p.arc in self._arc_by_id and 0 < p.offset < self.arc(p.arc).length

    # -- metric ------------------------------------------------------------

    def node_distances(self, source: str) -> dict[str, Fraction]:
        """Exact single-source shortest path lengths (Dijkstra), cached."""
        if source in self._dist_cache:
            return self._dist_cache[source]
        dist = {source: Fraction(0)}
        counter = itertools.count()
        heap = [(Fraction(0), next(counter), source)]
        while heap:
            d, _, n = heapq.heappop(heap)
            if d > dist[n]:
                continue
            for a in self._incident[n]:
                m = a.other(n)
                nd = d + a.length
                if m not in dist or nd < dist[m]:
                    dist[m] = nd
                    heapq.heappush(heap, (nd, next(counter), m))
        self._dist_cache[source] = dist
        return dist

    def node_path(self, source: str, target: str) -> list[str]:
        """Node sequence of a shortest path between two nodes."""
        if source == target:
            return [source]
        dist = {source: Fraction(0)}
        parent: dict[str, str] = {}
        counter = itertools.count()
        heap = [(Fraction(0), next(counter), source)]
        while heap:
            d, _, n = heapq.heappop(heap)
            if d > dist[n]:
                continue
            for a in self._incident[n]:
                m = a.other(n)
                nd = d + a.length
                if m not in dist or nd < dist[m]:
                    dist[m] = nd
                    parent[m] = n
                    heapq.heappush(heap, (nd, next(counter), m))
        path = [target]
        while path[-1] != source:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _point_node_anchors(self, p: Point) -> list[tuple[str, Fraction]]:
        if p.is_node:
            return [(p.node, Fraction(0))]
        a = self.arc(p.arc)
        return [(a.u, p.offset), (a.v, a.length - p.offset)]

    def distance(self, a: Point, b: Point) -> Fraction:
        """Length of the shortest path between two points of the network."""
        if a == b:
            return Fraction(0)
        best = None
        if not a.is_node and not b.is_node and a.arc == b.arc:
            best = abs(a.offset - b.offset)
        for u, du in self._point_node_anchors(a):
            dist_u = self.node_distances(u)
            for v, dv in self._point_node_anchors(b):
                cand = du + dist_u[v] + dv
                if best is None or cand < best:
                    best = cand
        return best

    def ball(self, center: Point, radius) -> "SubNetwork":
        """Closed metric ball around `center`; always a connected subnetwork."""
        r = frac(radius)
        if r < 0:
            raise ValidationError("radius must be nonnegative")
        segs = []
        for a in self.arcs:
            ivs = []
            du = self.distance(center, Point(node=a.u))
            dv = self.distance(center, Point(node=a.v))
            if r >= du:
                ivs.append((Fraction(0), min(a.length, r - du)))
            if r >= dv:
                ivs.append((max(Fraction(0), a.length - (r - dv)), a.length))
            if not center.is_node and center.arc == a.id:
                ivs.append((max(Fraction(0), center.offset - r), min(a.length, center.offset + r)))
            for lo, hi in ivs:
                if lo < hi:
                    segs.append(Segment(a.id, lo, hi))
        if segs:
            return SubNetwork.from_segments(self, segs)
        return SubNetwork.single_point(self, center)


# -- subnetworks -----------------------------------------------------------


def _merge_intervals(intervals: Iterable[tuple[Fraction, Fraction]]):
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class Materialized:
    """Standalone Network view of a subnetwork plus maps back to the host."""

    net: Network
    node_to_host: dict
    arc_to_host: dict  # materialized arc id -> (host arc id, lo offset)

    def host_point_name(self, p: Point) -> str:
        for name, hp in self.node_to_host.items():
            if hp == p:
                return name
        raise ValidationError(f"{p!r} is not a node of the materialized subnetwork")

    def translate_walk(self, walk: "Walk", host: Network) -> "Walk":
        steps = []
        for s in walk.steps:
            host_arc, lo = self.arc_to_host[s.arc]
            steps.append(Step(host_arc, lo + s.start, lo + s.end))
        start = self.node_to_host[walk.start.node]
        return Walk(host, start, steps)


class SubNetwork:
    """Closed union of arc segments (and possibly isolated points) of a host
    network.  Measures, containment and splitting are exact."""

    def __init__(self, host: Network, segments: dict, points: frozenset):
        self.host = host
        self.segments = segments  # arc id -> tuple of (lo, hi), merged, disjoint
        self.points = points      # isolated Points not covered by any segment
        self._measure = sum((hi - lo for ivs in segments.values() for lo, hi in ivs), Fraction(0))

    # -- construction --------------------------------------------------

    @classmethod
    def whole(cls, host: Network) -> "SubNetwork":
        return cls(host, {a.id: ((Fraction(0), a.length),) for a in host.arcs}, frozenset())

    @classmethod
    def from_segments(cls, host: Network, segs: Iterable[Segment], points: Iterable[Point] = ()) -> "SubNetwork":
        by_arc: dict[str, list] = {}
        for s in segs:
            a = host.arc(s.arc)
            lo, hi = frac(s.lo), frac(s.hi)
            if not (0 <= lo < hi <= a.length):
                raise ValidationError(f"segment {s!r} outside arc of length {a.length}")
            by_arc.setdefault(s.arc, []).append((lo, hi))
        merged = {aid: _merge_intervals(ivs) for aid, ivs in sorted(by_arc.items())}
        sub = cls(host, merged, frozenset())
        extra = frozenset(p for p in points if not sub.contains(p))
        return cls(host, merged, extra)

    @classmethod
    def single_point(cls, host: Network, p: Point) -> "SubNetwork":
        if not (p.is_node or host.contains_point(p)):
            raise ValidationError(f"{p!r} not on network")
        return cls(host, {}, frozenset([p]))

    # -- queries ---------------------------------------------------------

    @property
    def measure(self) -> Fraction:
        return self._measure

    def segment_list(self) -> tuple[Segment, ...]:
        return tuple(Segment(aid, lo, hi) for aid, ivs in self.segments.items() for lo, hi in ivs)

    def contains(self, p: Point) -> bool:
        if p in self.points:
            return True
        if p.is_node:
            for a in self.host.incident(p.node):
                for lo, hi in self.segments.get(a.id, ()):
                    if (a.u == p.node and lo == 0) or (a.v == p.node and hi == a.length):
                        return True
            return False
        for lo, hi in self.segments.get(p.arc, ()):
            if lo <= p.offset <= hi:
                return True
        return False

    def covered_nodes(self) -> tuple[str, ...]:
        found = {p.node for p in self.points if p.is_node}
        for aid, ivs in self.segments.items():
            a = self.host.arc(aid)
            for lo, hi in ivs:
                if lo == 0:
                    found.add(a.u)
                if hi == a.length:
                    found.add(a.v)
        return tuple(sorted(found))

    def host_leaf_nodes_inside(self) -> tuple[str, ...]:
        leaves = set(self.host.leaf_nodes())
        return tuple(n for n in self.covered_nodes() if n in leaves)

    def contains_sub(self, other: "SubNetwork") -> bool:
        for aid, ivs in other.segments.items():
            mine = self.segments.get(aid, ())
            for lo, hi in ivs:
                if not any(mlo <= lo and hi <= mhi for mlo, mhi in mine):
                    return False
        return all(self.contains(p) for p in other.points)

    def overlap_measure(self, other: "SubNetwork") -> Fraction:
        total = Fraction(0)
        for aid, ivs in self.segments.items():
            for olo, ohi in other.segments.get(aid, ()):
                for lo, hi in ivs:
                    total += max(Fraction(0), min(hi, ohi) - max(lo, olo))
        return total

    def complement(self) -> "SubNetwork":
        """Closure of the host minus this subnetwork."""
        segs = []
        for a in self.host.arcs:
            cursor = Fraction(0)
            for lo, hi in self.segments.get(a.id, ()):
                if cursor < lo:
                    segs.append(Segment(a.id, cursor, lo))
                cursor = hi
            if cursor < a.length:
                segs.append(Segment(a.id, cursor, a.length))
        if not segs:
            raise ValidationError("complement has empty interior")
        return SubNetwork.from_segments(self.host, segs)

    def grid_points(self, step, extra: Iterable[Point] = ()) -> list[Point]:
        """Nodes, segment endpoints and uniform subdivisions at the given step."""
        h = frac(step)
        if h <= 0:
            raise ValidationError("grid step must be positive")
        pts = {self.host.node_point(n) for n in self.covered_nodes()}
        pts.update(self.points)
        for seg in self.segment_list():
            off = seg.lo
            while off < seg.hi:
                pts.add(self.host.point(seg.arc, off))
                off += h
            pts.add(self.host.point(seg.arc, seg.hi))
        pts.update(extra)
        return sorted(pts, key=Point.sort_key)

    # -- connectivity ------------------------------------------------------

    def _flood(self, seeds: list[int], blocked_node: str | None) -> set[int]:
        """Flood fill over segment indices; adjacency through shared host
        nodes only (segments on a common arc are pre-merged)."""
        segs = self.segment_list()
        touch: dict[str, list[int]] = {}
        for i, s in enumerate(segs):
            a = self.host.arc(s.arc)
            for node, hit in ((a.u, s.lo == 0), (a.v, s.hi == a.length)):
                if hit and node != blocked_node:
                    touch.setdefault(node, []).append(i)
        reached = set(seeds)
        frontier = list(seeds)
        while frontier:
            i = frontier.pop()
            s = segs[i]
            a = self.host.arc(s.arc)
            for node, hit in ((a.u, s.lo == 0), (a.v, s.hi == a.length)):
                if not hit or node == blocked_node:
                    continue
                for j in touch.get(node, ()):
                    if j not in reached:
                        reached.add(j)
                        frontier.append(j)
        return reached

    def components(self) -> list["SubNetwork"]:
        segs = self.segment_list()
        remaining = set(range(len(segs)))
        out = []
        while remaining:
            seed = min(remaining)
            comp = self._flood([seed], None) & remaining
            remaining -= comp
            out.append(SubNetwork.from_segments(self.host, [segs[i] for i in sorted(comp)]))
        for p in sorted(self.points, key=Point.sort_key):
            out.append(SubNetwork.single_point(self.host, p))
        out.sort(key=lambda s: min((seg.arc, seg.lo) for seg in s.segment_list()) if s.segments else ("~", Fraction(0)))
        return out

    def split_at(self, p: Point) -> list["SubNetwork"]:
        """Closed components of the subnetwork minus `p`, each re-closed to
        include `p` on its boundary.  The host must be a tree for the result
        to be a genuine split."""
        if not self.contains(p):
            raise ValidationError(f"{p!r} not in subnetwork")
        if p.is_node:
            parts = SubNetwork(self.host, self.segments, self.points - {p})
            segs = parts.segment_list()
            seed_groups: list[list[int]] = []
            used: set[int] = set()
            for i, s in enumerate(segs):
                a = self.host.arc(s.arc)
                if (a.u == p.node and s.lo == 0) or (a.v == p.node and s.hi == a.length):
                    seed_groups.append([i])
            out = []
            for group in seed_groups:
                if group[0] in used:
                    continue
                comp = parts._flood(group, p.node)
                used |= comp
                out.append(SubNetwork.from_segments(self.host, [segs[i] for i in sorted(comp)]))
            return out
        segs = []
        for seg in self.segment_list():
            if seg.arc == p.arc and seg.lo < p.offset < seg.hi:
                segs.append(Segment(seg.arc, seg.lo, p.offset))
                segs.append(Segment(seg.arc, p.offset, seg.hi))
            else:
                segs.append(seg)
        halves = SubNetwork._unmerged(self.host, segs)
        idx = halves.segment_list()
        out = []
        used: set[int] = set()
        for i, s in enumerate(idx):
            if i in used:
                continue
            if s.arc == p.arc and (s.hi == p.offset or s.lo == p.offset):
                comp = halves._flood([i], None)
                used |= comp
                out.append(SubNetwork.from_segments(self.host, [idx[j] for j in sorted(comp)]))
        return out

    @classmethod
    def _unmerged(cls, host, segs):
        """Like from_segments but keeps abutting segments separate; the two
        halves around an interior cut share no node, so a node flood cannot
        cross the cut."""
        by_arc: dict[str, list] = {}
        for s in segs:
            by_arc.setdefault(s.arc, []).append((s.lo, s.hi))
        return cls(host, {aid: tuple(sorted(ivs)) for aid, ivs in sorted(by_arc.items())}, frozenset())

    # -- materialization ----------------------------------------------------

    def materialize(self) -> Materialized:
        """Standalone Network with cut endpoints promoted to fresh nodes."""
        if self._measure == 0:
            raise ValidationError("cannot materialize a zero-measure subnetwork")
        host_nodes = set(self.host.nodes)
        node_to_host: dict[str, Point] = {}

        def name_for(arc: Arc, off: Fraction) -> str:
            end = arc.endpoint_at(off)
            if end is not None:
                node_to_host[end] = Point(node=end)
                return end
            nm = f"{arc.id}@{off}"
            while nm in host_nodes:
                nm = "~" + nm
            node_to_host[nm] = Point(arc=arc.id, offset=off)
            return nm

        arcs = []
        arc_to_host: dict[str, tuple[str, Fraction]] = {}
        for seg in self.segment_list():
            a = self.host.arc(seg.arc)
            nu = name_for(a, seg.lo)
            nv = name_for(a, seg.hi)
            aid = f"{seg.arc}[{seg.lo}:{seg.hi}]"
            arcs.append((aid, nu, nv, seg.hi - seg.lo))
            arc_to_host[aid] = (seg.arc, seg.lo)
        net = Network(node_to_host.keys(), arcs)
        return Materialized(net, node_to_host, arc_to_host)


def components_after_removal(net: Network, x: Point) -> list[SubNetwork]:
    """Closed components of a tree minus a point; measures sum to the total
    length.  A regular point yields two components, a degree-n node yields n."""
    if not net.is_tree():
        raise ValidationError("network is not a tree")
    if not (x.is_node or net.contains_point(x)):
        raise ValidationError(f"{x!r} not on network")
    return SubNetwork.whole(net).split_at(x)


# -- walks -------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """Single traversal of part of one arc, from offset `start` to `end`."""

    arc: str
    start: Fraction
    end: Fraction

    @property
    def length(self) -> Fraction:
        return abs(self.end - self.start)


class Walk:
    """Unit-speed walk: a start point plus contiguous arc steps.

    A walk with no steps is stationary (a patrol that never moves).  Closed
    walks (end point equal to start point) can be treated as periodic by the
    game engine.  `visit_times` enumerates the exact instants a point is
    occupied; for a stationary walk at the queried point the single time 0 is
    returned and `is_stationary` serves as the dwell marker.
    """

    def __init__(self, net: Network, start: Point, steps: Sequence[Step] = ()):
        self.net = net
        self.start = start
        self.steps = tuple(steps)
        cum = [Fraction(0)]
        where = start
        for s in self.steps:
            a = net.arc(s.arc)
            if s.start == s.end:
                raise ValidationError(f"zero-length step on arc {s.arc!r}")
            for off in (s.start, s.end):
                if off < 0 or off > a.length:
                    raise ValidationError(f"step offset {off} outside arc {s.arc!r}")
            entry = net.point(s.arc, s.start)
            if entry != where:
                raise ValidationError(f"step on {s.arc!r} starts at {entry!r}, walk is at {where!r}")
            where = net.point(s.arc, s.end)
            cum.append(cum[-1] + s.length)
        self._cum = tuple(cum)
        self.end_point = where

    @property
    def duration(self) -> Fraction:
        return self._cum[-1]

    @property
    def is_closed(self) -> bool:
        return self.end_point == self.start

    @property
    def is_stationary(self) -> bool:
        return not self.steps

    def position(self, t) -> Point:
        t = frac(t)
        if t < 0 or t > self.duration:
            raise ValidationError(f"time {t} outside [0, {self.duration}]")
        if self.is_stationary:
            return self.start
        lo, hi = 0, len(self.steps)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._cum[mid + 1] < t:
                lo = mid + 1
            else:
                hi = mid
        s = self.steps[lo]
        dt = t - self._cum[lo]
        off = s.start + dt if s.end > s.start else s.start - dt
        return self.net.point(s.arc, off)

    def visit_times(self, x: Point) -> tuple[Fraction, ...]:
        """Sorted exact times in [0, duration] at which the walk occupies x."""
        if self.is_stationary:
            return (Fraction(0),) if x == self.start else ()
        times = set()
        if not x.is_node:
            for i, s in enumerate(self.steps):
                if s.arc != x.arc:
                    continue
                lo, hi = min(s.start, s.end), max(s.start, s.end)
                if lo <= x.offset <= hi:
                    times.add(self._cum[i] + abs(x.offset - s.start))
        else:
            if self.start == x:
                times.add(Fraction(0))
            for i, s in enumerate(self.steps):
                a = self.net.arc(s.arc)
                if a.endpoint_at(s.start) == x.node:
                    times.add(self._cum[i])
                if a.endpoint_at(s.end) == x.node:
                    times.add(self._cum[i + 1])
        return tuple(sorted(times))

    def reversed(self) -> "Walk":
        steps = [Step(s.arc, s.end, s.start) for s in reversed(self.steps)]
        return Walk(self.net, self.end_point, steps)

    def repeated(self, k: int) -> "Walk":
        if not self.is_closed:
            raise ValidationError("only closed walks can be repeated")
        return Walk(self.net, self.start, self.steps * k)

    def arc_traversal_counts(self) -> dict[str, Fraction]:
        """Total traversed length per arc, as a multiple of the arc length."""
        out: dict[str, Fraction] = {}
        for s in self.steps:
            out[s.arc] = out.get(s.arc, Fraction(0)) + s.length
        return {aid: tot / self.net.arc(aid).length for aid, tot in out.items()}


def walk_through_nodes(net: Network, nodes: Sequence[str], initial: tuple | None = None) -> Walk:
    """Walk visiting the given node sequence; consecutive nodes must share an
    arc (the least arc id is used when several do).  `initial` optionally
    starts the walk at (arc_id, offset) moving toward nodes[0]."""
    steps = []
    if initial is not None:
        arc_id, offset = initial
        a = net.arc(arc_id)
        off = frac(offset)
        if nodes and nodes[0] == a.u:
            steps.append(Step(arc_id, off, Fraction(0)))
        elif nodes and nodes[0] == a.v:
            steps.append(Step(arc_id, off, a.length))
        else:
            raise ValidationError("initial arc does not lead to the first waypoint")
        start = net.point(arc_id, off)
    else:
        if not nodes:
            raise ValidationError("empty node walk")
        start = net.node_point(nodes[0])
    for u, v in zip(nodes, nodes[1:]):
        cands = [a for a in net.incident(u) if a.other(u) == v and a.u != a.v]
        if not cands:
            raise ValidationError(f"no arc between {u!r} and {v!r}")
        a = cands[0]
        if a.u == u:
            steps.append(Step(a.id, Fraction(0), a.length))
        else:
            steps.append(Step(a.id, a.length, Fraction(0)))
    return Walk(net, start, steps)


def double_traversal(net: Network, start: str) -> Walk:
    """Depth-first closed tour of a tree traversing every arc exactly twice.

    Children are visited in canonical arc-id order, so the tour is
    deterministic; its duration is twice the total length.
    """
    if not net.is_tree():
        raise ValidationError("network is not a tree")
    steps: list[Step] = []

    def visit(node: str, came: str | None):
        for a in net.incident(node):
            if a.id == came:
                continue
            if a.u == node:
                steps.append(Step(a.id, Fraction(0), a.length))
            else:
                steps.append(Step(a.id, a.length, Fraction(0)))
            visit(a.other(node), a.id)
            if a.u == node:
                steps.append(Step(a.id, a.length, Fraction(0)))
            else:
                steps.append(Step(a.id, Fraction(0), a.length))

    visit(start, None)
    return Walk(net, net.node_point(start), steps)


def eulerian_tour(net: Network, start: str | None = None) -> Walk:
    """Closed walk traversing every arc exactly once (Hierholzer).

    Requires every node degree to be even; the tour is deterministic given
    the canonical arc order.
    """
    if not net.is_eulerian():
        raise ValidationError("network is not Eulerian")
    if start is None:
        start = net.nodes[0]
    used: set[str] = set()
    cursor: dict[str, int] = {n: 0 for n in net.nodes}
    order: list[tuple[str, str]] = []  # (arc id, node entered from)
    stack: list[tuple[str, tuple[str, str] | None]] = [(start, None)]
    while stack:
        node, via = stack[-1]
        inc = net.incident(node)
        i = cursor[node]
        while i < len(inc) and inc[i].id in used:
            i += 1
        cursor[node] = i
        if i < len(inc):
            a = inc[i]
            used.add(a.id)
            stack.append((a.other(node), (a.id, node)))
        else:
            stack.pop()
            if via is not None:
                order.append(via)
    order.reverse()
    steps = []
    for arc_id, from_node in order:
        a = net.arc(arc_id)
        if a.u == from_node:
            steps.append(Step(arc_id, Fraction(0), a.length))
        else:
            steps.append(Step(arc_id, a.length, Fraction(0)))
    walk = Walk(net, net.node_point(start), steps)
    if len(used) != len(net.arcs) or not walk.is_closed:
        raise ValidationError("network is not Eulerian")  # disconnected arc set
    return walk


# -- standard constructions & validation -------------------------------------


def complete_network(n: int, length=1, prefix: str = "v") -> Network:
    """Complete simple network on n nodes; every arc gets the same length."""
    if n < 2:
        raise ValidationError("complete network needs at least 2 nodes")
    names = [f"{prefix}{i}" for i in range(1, n + 1)]
    ln = frac(length)
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            arcs.append((f"{names[i]}-{names[j]}", names[i], names[j], ln))
    return Network(names, arcs)


def path_network(length, pieces: int = 1, prefix: str = "p") -> Network:
    """Path of the given total length split into equal-length arcs."""
    total = frac(length)
    names = [f"{prefix}{i}" for i in range(pieces + 1)]
    arcs = [(f"{prefix}a{i}", names[i], names[i + 1], total / pieces) for i in range(pieces)]
    return Network(names, arcs)


def star_network(arm_lengths, prefix: str = "s") -> Network:
    center = f"{prefix}0"
    nodes = [center]
    arcs = []
    for i, ln in enumerate(arm_lengths, start=1):
        leaf = f"{prefix}{i}"
        nodes.append(leaf)
        arcs.append((f"{prefix}a{i}", center, leaf, frac(ln)))
    return Network(nodes, arcs)


def validate_alpha(net: Network, alpha) -> Fraction:
    """Check an attack duration against the network's minimum tour time.

    Trees admit tours of duration twice the length, Eulerian networks of
    exactly the length; other networks are accepted up to twice the length
    with a warning because their minimum tour time is not computed here.
    """
    a = frac(alpha)
    mu = net.total_length
    if a <= 0:
        raise ValidationError("attack duration must be positive")
    if net.is_tree():
        if a > 2 * mu:
            raise ValidationError(f"attack duration {a} exceeds tree tour time {2 * mu}")
    elif net.is_eulerian():
        if a > mu:
            raise ValidationError(f"attack duration {a} exceeds Eulerian tour time {mu}")
    else:
        if a > 2 * mu:
            raise ValidationError(f"attack duration {a} exceeds doubled length {2 * mu}")
        warnings.warn("minimum tour time not computed for this network; accepting duration <= twice the length")
    return a


# -- text format --------------------------------------------------------------


def parse_network(text: str) -> Network:
    """Parse the line-oriented network format.

    One declaration per line: ``node <name>`` or ``arc <name> <u> <v> <length>``
    where length is a decimal or p/q rational.  ``#`` starts a comment.
    Errors carry the offending line number.
    """
    nodes: list[str] = []
    arcs: list[tuple] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 2:
                raise FormatError(f"line {ln}: expected 'node <name>'")
            nodes.append(parts[1])
        elif parts[0] == "arc":
            if len(parts) != 5:
                raise FormatError(f"line {ln}: expected 'arc <name> <u> <v> <length>'")
            try:
                length = frac(parts[4])
            except (ValueError, ZeroDivisionError, TypeError):
                raise FormatError(f"line {ln}: bad length {parts[4]!r}") from None
            if length <= 0:
                raise FormatError(f"line {ln}: nonpositive length {length}")
            arcs.append((parts[1], parts[2], parts[3], length))
        else:
            raise FormatError(f"line {ln}: unknown declaration {parts[0]!r}")
    try:
        return Network(nodes, arcs)
    except ValidationError as e:
        raise FormatError(str(e)) from None


def format_network(net: Network) -> str:
    lines = [f"node {n}" for n in net.nodes]
    lines += [f"arc {a.id} {a.u} {a.v} {a.length}" for a in net.arcs]
    return "\n".join(lines) + "\n"
