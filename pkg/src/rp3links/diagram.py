"""Disk-model diagrams of links in RP³.

A diagram lives in a disk whose boundary circle (the *wall*) carries
``2n`` endpoints numbered counterclockwise; endpoint ``i`` is glued to
endpoint ``i + n``.  A strand that terminates at endpoint ``i`` (role
``head``) continues from endpoint ``i + n`` (role ``tail``).

Crossings are recorded with four arc labels in counterclockwise order,
starting at the incoming under-strand.  Every arc label occurs once as a
start and once as an end.

Internally most operations work with *ports*.  A port is either
``("x", crossing_id, slot)`` or ``("w", endpoint)``; an arc is a directed
edge from its start port to its end port.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

HEAD = "head"
TAIL = "tail"

Port = tuple


class DiagramError(ValueError):
    """Raised for malformed diagram sources or invalid structure."""

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{code}: {message}")


@dataclass(frozen=True)
class Crossing:
    id: str
    slots: tuple[str, str, str, str]


@dataclass(frozen=True)
class WallPassage:
    endpoint: int
    role: str
    arc: str


@dataclass(frozen=True)
class LinkComponent:
    id: str
    cycle: tuple[str, ...]
    wall_passage_count: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    euler_characteristic: int
    errors: tuple[tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "euler": self.euler_characteristic,
            "errors": [{"code": c, "msg": m} for c, m in self.errors],
        }


@dataclass(frozen=True)
class ProjectiveDiagram:
    boundary_count: int = 0
    crossings: tuple[Crossing, ...] = ()
    wall_passages: tuple[WallPassage, ...] = ()
    free_circles: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.boundary_count // 2

    @cached_property
    def crossing_map(self) -> dict[str, Crossing]:
        return {c.id: c for c in self.crossings}

    @cached_property
    def wall_map(self) -> dict[int, WallPassage]:
        return {w.endpoint: w for w in self.wall_passages}

    @cached_property
    def arc_ends(self) -> dict[str, tuple[Port, Port]]:
        """Map each arc label to ``(start_port, end_port)``.

        Raises DiagramError when roles cannot be assigned consistently.
        """
        return _infer_arc_ends(self)

    @cached_property
    def arcs(self) -> tuple[str, ...]:
        return tuple(self.arc_ends)

    @cached_property
    def port_arc(self) -> dict[Port, str]:
        table = {}
        for label, (s, e) in self.arc_ends.items():
            table[s] = label
            table[e] = label
        return table

    @cached_property
    def starts_at(self) -> dict[Port, str]:
        return {s: label for label, (s, _e) in self.arc_ends.items()}

    def crossing_sign(self, cid: str) -> int:
        """+1 when the over-strand runs from slot 1 to slot 3, else -1."""
        end = self.arc_ends[self.crossing_map[cid].slots[1]][1]
        return 1 if end == ("x", cid, 1) else -1

    @cached_property
    def signs(self) -> dict[str, int]:
        return {c.id: self.crossing_sign(c.id) for c in self.crossings}

    def next_port(self, port: Port) -> Port:
        """Start port of the strand continuing after an arc ends at ``port``."""
        if port[0] == "x":
            return ("x", port[1], (port[2] + 2) % 4)
        return ("w", (port[1] + self.n) % self.boundary_count)

    def __str__(self) -> str:
        return serialize(self)


# ----------------------------------------------------------------------
# Parsing and serialization

_LINE = re.compile(r"\s+")


def parse_diagram(text: str, strict: bool = True) -> ProjectiveDiagram:
    """Parse the line-oriented ``.pld`` format.

    Syntax errors always raise.  With ``strict`` the structural checks of
    :func:`validate` are also enforced and the first failure raised.
    """
    boundary = None
    crossings: list[Crossing] = []
    walls: list[WallPassage] = []
    circles: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = _LINE.split(line)
        head = tok[0]
        if head == "boundary":
            if len(tok) != 2 or not tok[1].isdigit():
                raise DiagramError("SYNTAX", "expected 'boundary <2n>'", lineno)
            if boundary is not None:
                raise DiagramError("SYNTAX", "boundary declared twice", lineno)
            boundary = int(tok[1])
        elif head == "cross":
            if len(tok) != 6:
                raise DiagramError("SYNTAX", "expected 'cross <id> <s0> <s1> <s2> <s3>'", lineno)
            crossings.append(Crossing(tok[1], tuple(tok[2:6])))
        elif head == "wall":
            if len(tok) != 4 or not tok[1].isdigit() or tok[2] not in (HEAD, TAIL):
                raise DiagramError("SYNTAX", "expected 'wall <i> <head|tail> <arc>'", lineno)
            walls.append(WallPassage(int(tok[1]), tok[2], tok[3]))
        elif head == "circle":
            if len(tok) != 2:
                raise DiagramError("SYNTAX", "expected 'circle <id>'", lineno)
            circles.append(tok[1])
        else:
            raise DiagramError("SYNTAX", f"unknown directive {head!r}", lineno)
    walls.sort(key=lambda w: w.endpoint)
    d = ProjectiveDiagram(boundary or 0, tuple(crossings), tuple(walls), tuple(circles))
    if strict:
        report = validate(d)
        if not report.ok:
            code, msg = report.errors[0]
            raise DiagramError(code, msg)
    return d


def serialize(d: ProjectiveDiagram) -> str:
    lines = [f"boundary {d.boundary_count}"]
    for c in d.crossings:
        lines.append("cross " + " ".join((c.id,) + tuple(c.slots)))
    for w in sorted(d.wall_passages, key=lambda w: w.endpoint):
        lines.append(f"wall {w.endpoint} {w.role} {w.arc}")
    for c in d.free_circles:
        lines.append(f"circle {c}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# Structure inference


def _infer_arc_ends(d: ProjectiveDiagram) -> dict[str, tuple[Port, Port]]:
    occurrences: dict[str, list[Port]] = defaultdict(list)
    role: dict[Port, str] = {}
    for c in d.crossings:
        for slot, label in enumerate(c.slots):
            occurrences[label].append(("x", c.id, slot))
        role[("x", c.id, 0)] = "end"
        role[("x", c.id, 2)] = "start"
    for w in d.wall_passages:
        port = ("w", w.endpoint)
        occurrences[w.arc].append(port)
        role[port] = "end" if w.role == HEAD else "start"
    for label, ports in occurrences.items():
        if len(ports) != 2:
            raise DiagramError(
                "ARC_MULTIPLICITY", f"arc {label!r} occurs {len(ports)} times, expected 2"
            )

    partner: dict[Port, Port] = {}
    for ports in occurrences.values():
        a, b = ports
        partner[a], partner[b] = b, a

    def flip(r: str) -> str:
        return "start" if r == "end" else "end"

    def over_mate(port: Port) -> Port | None:
        if port[0] == "x" and port[2] in (1, 3):
            return ("x", port[1], 4 - port[2])
        return None

    # Propagate roles along arcs and across over-strands.
    pending = list(role)
    unresolved = [("x", c.id, 1) for c in d.crossings]
    while True:
        while pending:
            port = pending.pop()
            for other in (partner[port], over_mate(port)):
                if other is None:
                    continue
                want = flip(role[port])
                have = role.get(other)
                if have is None:
                    role[other] = want
                    pending.append(other)
                elif have != want:
                    raise DiagramError(
                        "ARC_ROLE", f"inconsistent start/end roles near {other!r}"
                    )
        free = next((p for p in unresolved if p not in role), None)
        if free is None:
            break
        # Over-only loop: orientation is not forced, fix slot 1 as over-in.
        role[free] = "end"
        pending.append(free)

    ends: dict[str, tuple[Port, Port]] = {}
    for label, (a, b) in occurrences.items():
        if role[a] == role[b]:
            raise DiagramError("ARC_ROLE", f"arc {label!r} has two {role[a]}s")
        ends[label] = (a, b) if role[a] == "start" else (b, a)
    return ends


# ----------------------------------------------------------------------
# Building diagrams from port graphs


@dataclass
class PortGraph:
    """Mutable intermediate form used by constructions and moves.

    ``under`` maps crossing ids (in output order) to the parity of the
    slot pair carrying the under-strand.  Ports of the form
    ``("v", key)`` are pass-through nodes removed by :meth:`build`.
    ``origin`` optionally tags each arc; build reports which tags each
    output arc is made of.
    """

    boundary_count: int = 0
    arcs: list[tuple[Port, Port]] = field(default_factory=list)
    under: dict[str, int] = field(default_factory=dict)
    circles: list[str] = field(default_factory=list)
    origin: list = field(default_factory=list)

    @classmethod
    def of(cls, d: ProjectiveDiagram) -> "PortGraph":
        arcs = list(d.arc_ends.values())
        return cls(
            d.boundary_count,
            arcs,
            {c.id: 0 for c in d.crossings},
            list(d.free_circles),
            list(d.arc_ends),
        )

    def add(self, start: Port, end: Port, tag=None) -> None:
        self.arcs.append((start, end))
        self.origin.append(tag)

    def build_with_origin(self) -> tuple[ProjectiveDiagram, dict[str, tuple]]:
        origin = self.origin if len(self.origin) == len(self.arcs) else [None] * len(self.arcs)
        out_of: dict[Port, int] = {}
        for k, (s, _e) in enumerate(self.arcs):
            out_of[s] = k
        used = [False] * len(self.arcs)
        merged: list[tuple[Port, Port, tuple]] = []
        for k, (s, e) in enumerate(self.arcs):
            if used[k] or s[0] == "v":
                continue
            used[k] = True
            tags = [origin[k]]
            while e[0] == "v":
                k2 = out_of[e]
                used[k2] = True
                tags.append(origin[k2])
                e = self.arcs[k2][1]
            merged.append((s, e, tuple(tags)))
        circles = list(self.circles)
        loops: dict[str, tuple] = {}
        for k in range(len(self.arcs)):
            if not used[k]:
                # pure pass-through cycle: a crossing-free, wall-free circle
                tags = []
                j = k
                while not used[j]:
                    used[j] = True
                    tags.append(origin[j])
                    j = out_of[self.arcs[j][1]]
                label = _fresh(circles, "o")
                circles.append(label)
                loops[label] = tuple(tags)

        # rotate crossings so that slot 0 is the incoming under-strand
        ends = {e for _s, e, _t in merged}
        shift: dict[str, int] = {}
        for cid, parity in self.under.items():
            p = parity % 2
            shift[cid] = p if ("x", cid, p) in ends else p + 2

        def fix(port: Port) -> Port:
            if port[0] == "x":
                return ("x", port[1], (port[2] - shift[port[1]]) % 4)
            return port

        merged = [(fix(s), fix(e), t) for s, e, t in merged]
        order = {cid: i for i, cid in enumerate(self.under)}

        def key(port: Port):
            if port[0] == "x":
                return (0, order[port[1]], port[2])
            return (1, port[1], 0)

        merged.sort(key=lambda a: key(a[0]))
        slots: dict[str, list] = {cid: [None] * 4 for cid in self.under}
        walls = []
        provenance = dict(loops)
        for i, (s, e, tags) in enumerate(merged, start=1):
            label = str(i)
            provenance[label] = tags
            for port, r in ((s, TAIL), (e, HEAD)):
                if port[0] == "x":
                    slots[port[1]][port[2]] = label
                else:
                    walls.append(WallPassage(port[1], r, label))
        walls.sort(key=lambda w: w.endpoint)
        crossings = tuple(Crossing(cid, tuple(slots[cid])) for cid in self.under)
        d = ProjectiveDiagram(self.boundary_count, crossings, tuple(walls), tuple(circles))
        return d, provenance

    def build(self) -> ProjectiveDiagram:
        return self.build_with_origin()[0]


def _fresh(existing: Iterable[str], prefix: str) -> str:
    taken = set(existing)
    k = len(taken)
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


def fresh_crossing_id(d_or_ids, prefix: str = "c") -> str:
    ids = d_or_ids.under if isinstance(d_or_ids, PortGraph) else d_or_ids
    return _fresh(ids, prefix)


def renumber_wall(pg: PortGraph, keep: set[int]) -> None:
    """Drop wall endpoints not in ``keep`` and renumber the rest in order.

    ``keep`` must be closed under the antipodal pairing.
    """
    mapping = {old: new for new, old in enumerate(sorted(keep))}

    def fix(port: Port) -> Port:
        if port[0] == "w":
            return ("w", mapping[port[1]])
        return port

    pg.arcs = [(fix(s), fix(e)) for s, e in pg.arcs]
    pg.boundary_count = len(keep)


# ----------------------------------------------------------------------
# Sphere map and validation


def _sphere_map(d: ProjectiveDiagram):
    """Rotation system of the capped disk: returns (rotation, dart->vertex)."""
    rotation: dict = {}
    for c in d.crossings:
        rotation[("x", c.id)] = [None] * 4
    m = d.boundary_count
    for j in range(m):
        rotation[("w", j)] = [("b", j, 1), None, ("b", (j - 1) % m, -1)]
    for label, (s, e) in d.arc_ends.items():
        for port, sgn in ((s, 1), (e, -1)):
            dart = ("a", label, sgn)
            if port[0] == "x":
                rotation[("x", port[1])][port[2]] = dart
            else:
                rotation[("w", port[1])][1] = dart
    position = {}
    for v, darts in rotation.items():
        for i, dart in enumerate(darts):
            position[dart] = (v, i)
    return rotation, position


def trace_faces(d: ProjectiveDiagram) -> list[list[tuple]]:
    """Faces of the sphere map as dart cycles, each face on the left."""
    rotation, position = _sphere_map(d)
    seen = set()
    faces = []
    for start in position:
        if start in seen:
            continue
        face = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            face.append(dart)
            rev = (dart[0], dart[1], -dart[2])
            v, i = position[rev]
            darts = rotation[v]
            dart = darts[(i - 1) % len(darts)]
        faces.append(face)
    return faces


def dart_tail(d: ProjectiveDiagram, dart: tuple) -> Port:
    """Port at which a dart starts."""
    kind, label, sgn = dart
    if kind == "b":
        j = label if sgn == 1 else (label + 1) % d.boundary_count
        return ("w", j)
    s, e = d.arc_ends[label]
    return s if sgn == 1 else e


def euler_characteristic(d: ProjectiveDiagram) -> int:
    """V - E + F of the capped sphere map, corrected to one component."""
    faces = trace_faces(d)
    vertices = len(d.crossings) + d.boundary_count
    if vertices == 0:
        return 2
    edges = len(d.arc_ends) + d.boundary_count
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def vertex(port):
        return ("x", port[1]) if port[0] == "x" else ("w", port[1])

    for c in d.crossings:
        find(("x", c.id))
    for j in range(d.boundary_count):
        parent[find(("w", j))] = find(("w", (j + 1) % d.boundary_count))
    for s, e in d.arc_ends.values():
        parent[find(vertex(s))] = find(vertex(e))
    components = len({find(v) for v in parent})
    return vertices - edges + len(faces) - 2 * (components - 1)


def validate(d: ProjectiveDiagram) -> ValidationReport:
    errors: list[tuple[str, str]] = []
    m = d.boundary_count
    if m % 2:
        errors.append(("BAD_BOUNDARY", f"boundary count {m} is odd"))
        return ValidationReport(False, 0, tuple(errors))
    seen: dict[int, WallPassage] = {}
    for w in d.wall_passages:
        if w.endpoint >= m:
            errors.append(("ENDPOINT_RANGE", f"endpoint {w.endpoint} >= {m}"))
        elif w.endpoint in seen:
            errors.append(("DUPLICATE_ENDPOINT", f"endpoint {w.endpoint} declared twice"))
        else:
            seen[w.endpoint] = w
    for j in range(m):
        if j not in seen:
            errors.append(("MISSING_ENDPOINT", f"endpoint {j} is not used"))
    n = m // 2
    for j in range(n):
        a, b = seen.get(j), seen.get(j + n)
        if a and b and a.role == b.role:
            errors.append(
                ("CONTINUATION_MISMATCH", f"endpoints {j} and {j + n} are both {a.role}")
            )
    ids = [c.id for c in d.crossings]
    if len(set(ids)) != len(ids):
        errors.append(("DUPLICATE_CROSSING", "crossing ids are not unique"))
    labels = set(d.free_circles)
    if len(labels) != len(d.free_circles):
        errors.append(("DUPLICATE_CIRCLE", "circle ids are not unique"))
    if errors:
        return ValidationReport(False, 0, tuple(errors))
    try:
        d.arc_ends
    except DiagramError as exc:
        return ValidationReport(False, 0, ((exc.code, str(exc)),))
    chi = euler_characteristic(d)
    if chi != 2:
        errors.append(("NONPLANAR", f"traced map has Euler characteristic {chi}"))
    elif m:
        outer = next(f for f in trace_faces(d) if ("b", 0, -1) in f)
        if len(outer) != m:
            errors.append(("OUTER_REGION", "a strand runs outside the boundary circle"))
    return ValidationReport(not errors, chi, tuple(errors))


# ----------------------------------------------------------------------
# Components


def component_decomposition(d: ProjectiveDiagram) -> list[LinkComponent]:
    comps = []
    seen: set[str] = set()
    for label in d.arcs:
        if label in seen:
            continue
        cycle = []
        passages = 0
        cur = label
        while cur not in seen:
            seen.add(cur)
            cycle.append(cur)
            end = d.arc_ends[cur][1]
            if end[0] == "w":
                passages += 1
            cur = d.starts_at[d.next_port(end)]
        comps.append(LinkComponent(f"K{len(comps)}", tuple(cycle), passages))
    for c in d.free_circles:
        comps.append(LinkComponent(c, (), 0))
    return comps


def component_of_arc(d: ProjectiveDiagram) -> dict[str, str]:
    return {a: comp.id for comp in component_decomposition(d) for a in comp.cycle}


def delete_components(d: ProjectiveDiagram, keep: Iterable[str]) -> ProjectiveDiagram:
    """Sub-diagram of the components listed in ``keep``.

    Crossings between a kept and a discarded strand are smoothed into the
    kept strand.
    """
    keep = set(keep)
    comps = component_decomposition(d)
    known = {c.id for c in comps}
    unknown = keep - known
    if unknown:
        raise DiagramError("UNKNOWN_COMPONENT", f"no component {sorted(unknown)}")
    if keep == known:
        return d
    owner = component_of_arc(d)
    kept_arcs = {a for a, cid in owner.items() if cid in keep}
    pg = PortGraph(d.boundary_count)
    for c in d.crossings:
        under_kept = c.slots[0] in kept_arcs
        over_kept = c.slots[1] in kept_arcs
        if under_kept and over_kept:
            pg.under[c.id] = 0
    for label in d.arcs:
        if label not in kept_arcs:
            continue
        s, e = d.arc_ends[label]
        pg.add(_smooth(pg, s), _smooth(pg, e), label)
    pg.circles = [c for c in d.free_circles if c in keep]
    wall_keep = {p[1] for s, e in pg.arcs for p in (s, e) if p[0] == "w"}
    renumber_wall(pg, wall_keep)
    return pg.build()


def _smooth(pg: PortGraph, port: Port) -> Port:
    if port[0] == "x" and port[1] not in pg.under:
        return ("v", port[1], port[2] % 2)
    return port


# ----------------------------------------------------------------------
# Canonical code


def canonical_code(d: ProjectiveDiagram) -> str:
    """Relabeling- and boundary-rotation-invariant code of a valid diagram."""
    pieces = []
    # group crossings by map component
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def vkey(port):
        return "wall" if port[0] == "w" else port[1]

    for c in d.crossings:
        find(c.id)
    for s, e in d.arc_ends.values():
        parent[find(vkey(s))] = find(vkey(e))
    groups: dict = defaultdict(list)
    for c in d.crossings:
        groups[find(c.id)].append(c.id)
    wall_root = find("wall") if d.boundary_count else None
    head = ""
    if d.boundary_count:
        head = min(
            _traverse(d, [("w", (s + j) % d.boundary_count) for j in range(d.boundary_count)])
            for s in range(d.boundary_count)
        )
    for root, members in groups.items():
        if root == wall_root:
            continue
        pieces.append(min(_traverse(d, [("x", cid, 0)]) for cid in members))
    pieces.sort()
    return f"B{d.boundary_count}|{head}|" + "|".join(pieces) + f"|O{len(d.free_circles)}"


def _traverse(d: ProjectiveDiagram, seeds: list[Port]) -> str:
    cnum: dict[str, int] = {}
    anum: dict[str, int] = {}
    queue: list[Port] = []
    wall_bits = []

    def visit_arc(label):
        if label not in anum:
            anum[label] = len(anum)
            for port in d.arc_ends[label]:
                if port[0] == "x" and port[1] not in cnum:
                    cnum[port[1]] = len(cnum)
                    queue.append(port[1])

    order = []
    for seed in seeds:
        if seed[0] == "w":
            label = d.port_arc[seed]
            visit_arc(label)
            role = "h" if d.arc_ends[label][1] == seed else "t"
            wall_bits.append(f"{role}{anum[label]}")
        else:
            if seed[1] not in cnum:
                cnum[seed[1]] = len(cnum)
                queue.append(seed[1])
    i = 0
    while i < len(queue):
        cid = queue[i]
        i += 1
        for label in d.crossing_map[cid].slots:
            visit_arc(label)
        order.append(cid)
    cross = ";".join(
        ",".join(str(anum[x]) for x in d.crossing_map[cid].slots) for cid in order
    )
    return ".".join(wall_bits) + "/" + cross
