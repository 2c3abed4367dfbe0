"""Readers and writers for the structured text formats.

Every rational field is written as ``p/q`` (or a plain integer) and parsed
back exactly, so a write/parse round trip reproduces the in-memory object
bit for bit.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError
from .factorization import Factorization
from .network import Network, Point, Segment, Step, SubNetwork, Walk, frac
from .strategies import AttackStrategy, PatrolStrategy, TemporalLaw, UniformPart


def fmt_frac(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_point(p: Point) -> str:
    if p.is_node:
        return f"node:{p.node}"
    return f"arc:{p.arc}:{fmt_frac(p.offset)}"


def parse_point(net: Network, text: str) -> Point:
    parts = text.split(":")
    if parts[0] == "node" and len(parts) == 2:
        return net.node_point(parts[1])
    if parts[0] == "arc" and len(parts) == 3:
        return net.point(parts[1], frac(parts[2]))
    raise FormatError(f"bad point {text!r}")


def fmt_segment(s: Segment) -> str:
    return f"{s.arc}:{fmt_frac(s.lo)}:{fmt_frac(s.hi)}"


def parse_segment(text: str) -> Segment:
    parts = text.split(":")
    if len(parts) != 3:
        raise FormatError(f"bad segment {text!r}")
    return Segment(parts[0], frac(parts[1]), frac(parts[2]))


def _fmt_temporal(t: TemporalLaw) -> str:
    if t.kind == "fixed":
        return f"temporal fixed {fmt_frac(t.value)}"
    return f"temporal uniform 0 {fmt_frac(t.value)}"


def _parse_temporal(parts: list[str], ln: int) -> TemporalLaw:
    if parts[1] == "fixed" and len(parts) == 3:
        return TemporalLaw.fixed(frac(parts[2]))
    if parts[1] == "uniform" and len(parts) == 4 and parts[2] == "0":
        return TemporalLaw.uniform(frac(parts[3]))
    raise FormatError(f"line {ln}: bad temporal law")


# -- attack strategies ---------------------------------------------------------


def write_attack(a: AttackStrategy) -> str:
    lines = ["attack", _fmt_temporal(a.temporal)]
    for p, m in a.atoms:
        lines.append(f"atom {fmt_point(p)} {fmt_frac(m)}")
    for part in a.uniform_parts:
        segs = " ".join(fmt_segment(s) for s in part.region.segment_list())
        lines.append(f"uniform {fmt_frac(part.mass)} {segs}")
    return "\n".join(lines) + "\n"


def parse_attack(net: Network, text: str) -> AttackStrategy:
    temporal = None
    atoms = []
    parts = []
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    if not lines or lines[0] != "attack":
        raise FormatError("line 1: expected 'attack' header")
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        tok = line.split()
        if tok[0] == "temporal":
            temporal = _parse_temporal(tok, ln)
        elif tok[0] == "atom" and len(tok) == 3:
            atoms.append((parse_point(net, tok[1]), frac(tok[2])))
        elif tok[0] == "uniform" and len(tok) >= 3:
            mass = frac(tok[1])
            segs = [parse_segment(t) for t in tok[2:]]
            parts.append(UniformPart(SubNetwork.from_segments(net, segs), mass))
        else:
            raise FormatError(f"line {ln}: bad attack record {tok[0]!r}")
    if temporal is None:
        raise FormatError("missing temporal law")
    return AttackStrategy(net, tuple(atoms), tuple(parts), temporal)


# -- patrol strategies -----------------------------------------------------------


def write_patrol(p: PatrolStrategy) -> str:
    lines = ["patrol"]
    for walk, s in p.components:
        lines.append(f"mix {fmt_frac(s)}")
        lines.append(f"walk {fmt_point(walk.start)}")
        for st in walk.steps:
            lines.append(f"step {st.arc} {fmt_frac(st.start)} {fmt_frac(st.end)}")
    return "\n".join(lines) + "\n"


def parse_patrol(net: Network, text: str) -> PatrolStrategy:
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    if not lines or lines[0] != "patrol":
        raise FormatError("line 1: expected 'patrol' header")
    comps = []
    prob = None
    start = None
    steps: list[Step] = []

    def flush(ln):
        if prob is None:
            return
        if start is None:
            raise FormatError(f"line {ln}: mix record without a walk")
        comps.append((Walk(net, start, steps.copy()), prob))

    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        tok = line.split()
        if tok[0] == "mix" and len(tok) == 2:
            flush(ln)
            prob = frac(tok[1])
            start = None
            steps.clear()
        elif tok[0] == "walk" and len(tok) == 2:
            start = parse_point(net, tok[1])
        elif tok[0] == "step" and len(tok) == 4:
            steps.append(Step(tok[1], frac(tok[2]), frac(tok[3])))
        else:
            raise FormatError(f"line {ln}: bad patrol record {tok[0]!r}")
    flush(len(lines))
    return PatrolStrategy(net, tuple(comps))


# -- factorizations ----------------------------------------------------------------


def write_factorization(f: Factorization) -> str:
    lines = [f"factorization m={f.regularity}" + ("" if f.certified else " uncertified")]
    for factor in f.factors:
        lines.append("factor " + " ".join(sorted(factor)))
    return "\n".join(lines) + "\n"


def parse_factorization(net: Network, text: str) -> Factorization:
    from .factorization import validate_factorization
    from .errors import FactorizationError

    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    if not lines or not lines[0].startswith("factorization m="):
        raise FormatError("line 1: expected 'factorization m=<k>' header")
    head = lines[0].split()
    try:
        m = int(head[1].split("=", 1)[1])
    except (IndexError, ValueError):
        raise FormatError("line 1: bad regularity") from None
    certified = "uncertified" not in head
    factors = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        tok = line.split()
        if tok[0] != "factor" or len(tok) < 2:
            raise FormatError(f"line {ln}: expected 'factor <arc>...'")
        factors.append(frozenset(tok[1:]))
    violations = validate_factorization(net, factors, m)
    if violations:
        raise FactorizationError(violations)
    ordered = tuple(sorted(factors, key=lambda f_: sorted(f_)))
    return Factorization(net, m, ordered, certified)


# -- reports --------------------------------------------------------------------


def write_decomposition_report(tree: Network, dec, alpha_star, local_root, value) -> str:
    lines = [
        f"alpha {fmt_frac(dec.alpha)}",
        f"mu {fmt_frac(tree.total_length)}",
        f"lambda_e {fmt_frac(dec.lambda_e)}",
        f"alpha_star {fmt_frac(alpha_star)}",
        f"local_root {fmt_point(local_root)}",
        f"value {fmt_frac(value)}",
    ]
    segs = ",".join(fmt_segment(s) for s in dec.core.segment_list())
    if dec.core.measure == 0:
        segs = ",".join(fmt_point(p) for p in sorted(dec.core.points, key=Point.sort_key))
    lines.append(f"core measure={fmt_frac(dec.core.measure)} segments={segs}")
    for j, comp in enumerate(dec.components, start=1):
        segs = ",".join(fmt_segment(s) for s in comp.subtree.segment_list())
        lines.append(
            f"component {j} root={fmt_point(comp.root)} measure={fmt_frac(comp.measure)} segments={segs}")
    return "\n".join(lines) + "\n"


RESULT_HEADER = "method,probability,ci_halfwidth,trials,seed,argmin_point,argmin_time"


def result_csv_row(result, argmin_point=None, argmin_time=None) -> str:
    prob = result.probability
    prob_s = fmt_frac(prob) if isinstance(prob, (Fraction, int)) else repr(prob)
    ci = "" if result.ci_halfwidth is None else repr(result.ci_halfwidth)
    trials = "" if result.trials is None else str(result.trials)
    seed = "" if result.seed is None else str(result.seed)
    pt = "" if argmin_point is None else fmt_point(argmin_point)
    tm = "" if argmin_time is None else fmt_frac(argmin_time)
    return f"{result.method},{prob_s},{ci},{trials},{seed},{pt},{tm}"
