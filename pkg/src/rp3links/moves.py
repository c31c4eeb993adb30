"""Diagram moves and a bounded search for a wall-free diagram.

Moves inside the disk are the Reidemeister moves R1-R3.  Two further
moves act at the wall:

* ``R4`` pushes a crossing adjacent to two consecutive endpoints
  ``i, i+1`` through the wall; it reappears next to ``i+n, i+n+1``.
  Crossing the wall reverses the planar rotation and the height
  coordinate, so the over-strand becomes the under-strand.
* ``R5-`` removes a crossing-free u-turn arc between consecutive
  endpoints together with its two antipodal passages; ``R5+`` inserts
  one by pushing a finger of an arc through the wall.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from rp3links.diagram import (
    DiagramError,
    PortGraph,
    ProjectiveDiagram,
    canonical_code,
    dart_tail,
    fresh_crossing_id,
    renumber_wall,
    trace_faces,
)

KINDS = ("R1+", "R1-", "R2+", "R2-", "R3", "R4", "R5+", "R5-")
REDUCING = ("R1-", "R2-", "R3", "R4", "R5-")

# Heights flip when a crossing passes through the wall.
R4_FLIPS_OVER = True


class MoveError(DiagramError):
    def __init__(self, message: str):
        super().__init__("INAPPLICABLE", message)


@dataclass(frozen=True)
class MoveDescriptor:
    kind: str
    site: tuple

    def to_json(self) -> dict:
        return {"kind": self.kind, "site": list(self.site)}

    @classmethod
    def from_json(cls, data: dict) -> "MoveDescriptor":
        return cls(data["kind"], tuple(data["site"]))


@dataclass(frozen=True)
class ReductionCertificate:
    moves: tuple[MoveDescriptor, ...]
    final: ProjectiveDiagram

    def to_json(self) -> dict:
        return {
            "type": "reduction",
            "moves": [m.to_json() for m in self.moves],
            "final": str(self.final),
        }


# ----------------------------------------------------------------------
# helpers


class _Faces:
    def __init__(self, d: ProjectiveDiagram):
        self.d = d
        self.faces = trace_faces(d)
        self.face_of = {dart: k for k, f in enumerate(self.faces) for dart in f}

    def tail(self, dart):
        return dart_tail(self.d, dart)

    def head(self, dart):
        return dart_tail(self.d, (dart[0], dart[1], -dart[2]))


def _virtualize(pg: PortGraph, cids) -> None:
    cids = set(cids)
    for cid in cids:
        pg.under.pop(cid, None)

    def fix(p):
        if p[0] == "x" and p[1] in cids:
            return ("v", p[1], p[2] % 2)
        return p

    pg.arcs = [(fix(s), fix(e)) for s, e in pg.arcs]


def _drop_arcs(pg: PortGraph, labels, d: ProjectiveDiagram) -> None:
    drop = {d.arc_ends[a] for a in labels}
    keep = [(a, o) for a, o in zip(pg.arcs, pg.origin) if a not in drop]
    pg.arcs = [a for a, _o in keep]
    pg.origin = [o for _a, o in keep]


def _substitute(pg: PortGraph, sub: dict) -> None:
    pg.arcs = [(sub.get(s, s), sub.get(e, e)) for s, e in pg.arcs]


def _slot_of(port):
    return port[2] if port[0] == "x" else None


# ----------------------------------------------------------------------
# site enumeration


def applicable_moves(d: ProjectiveDiagram, insertion_cap: int | None = 16) -> list[MoveDescriptor]:
    """Reducing/rearranging sites in full, insertion sites up to ``insertion_cap`` per kind."""
    fc = _Faces(d)
    out = []
    out += _r1_minus_sites(d)
    out += _r2_minus_sites(d, fc)
    out += _r3_sites(d, fc)
    out += _r4_sites(d, fc)
    out += _r5_minus_sites(d, fc)
    if insertion_cap is None or insertion_cap > 0:
        for sites in (_r1_plus_sites(d), _r2_plus_sites(d, fc), _r5_plus_sites(d, fc)):
            out += sites if insertion_cap is None else sites[:insertion_cap]
    return out


def _r1_minus_sites(d):
    sites = []
    for c in d.crossings:
        for k in range(4):
            s, e = d.arc_ends[c.slots[k]]
            if s[0] == e[0] == "x" and s[1] == e[1] == c.id and (s[2] - e[2]) % 4 in (1, 3):
                sites.append(MoveDescriptor("R1-", (c.id,)))
                break
    return sites


def _bigon(d, fc, face):
    if len(face) != 2 or any(dart[0] != "a" for dart in face):
        return None
    ports = [(fc.tail(dart), fc.head(dart)) for dart in face]
    if any(p[0] != "x" for pair in ports for p in pair):
        return None
    x, y = ports[0][0][1], ports[0][1][1]
    if x == y:
        return None
    (s1, e1), _ = ports
    if s1[2] % 2 != e1[2] % 2:
        return None
    return tuple(sorted((x, y)))


def _r2_minus_sites(d, fc):
    sites = []
    for face in fc.faces:
        pair = _bigon(d, fc, face)
        if pair:
            sites.append(MoveDescriptor("R2-", pair))
    return sites


def _triangle(d, fc, face):
    if len(face) != 3 or any(dart[0] != "a" for dart in face):
        return None
    sides = [(fc.tail(dart), fc.head(dart)) for dart in face]
    if any(p[0] != "x" for pair in sides for p in pair):
        return None
    if len({s[1] for s, _e in sides}) != 3:
        return None
    if not any(s[2] % 2 == 1 and e[2] % 2 == 1 for s, e in sides):
        return None
    return tuple(sorted(dart[1] for dart in face))


def _r3_sites(d, fc):
    sites = []
    for face in fc.faces:
        key = _triangle(d, fc, face)
        if key:
            sites.append(MoveDescriptor("R3", key))
    return sites


def _r4_face(d, fc, i):
    """Crossing id and slot k if the wall gap (i, i+1) bounds a triangle."""
    if d.n < 2:
        return None
    face = fc.faces[fc.face_of[("b", i, 1)]]
    if len(face) != 3:
        return None
    k = face.index(("b", i, 1))
    into, back = face[(k + 1) % 3], face[(k + 2) % 3]
    if into[0] != "a" or back[0] != "a":
        return None
    p_in, p_back = fc.head(into), fc.tail(back)
    if p_in[0] != "x" or p_back[0] != "x" or p_in[1] != p_back[1]:
        return None
    if (p_in[2] - p_back[2]) % 4 != 1:
        return None
    return p_back[1], p_back[2]


def _r4_sites(d, fc):
    sites = []
    for i in range(d.boundary_count):
        hit = _r4_face(d, fc, i)
        if hit:
            sites.append(MoveDescriptor("R4", (hit[0], i)))
    return sites


def _r5_uturn(d, fc, j):
    if d.n < 2:
        return None
    face = fc.faces[fc.face_of[("b", j, 1)]]
    if len(face) != 2:
        return None
    other = face[1] if face[0] == ("b", j, 1) else face[0]
    if other[0] != "a":
        return None
    return other[1]


def _r5_minus_sites(d, fc):
    sites, seen = [], set()
    n = d.n
    for j in range(d.boundary_count):
        if _r5_uturn(d, fc, j) is None:
            continue
        key = frozenset({j % n, (j + 1) % n})
        if key in seen:
            continue
        seen.add(key)
        sites.append(MoveDescriptor("R5-", (j,)))
    return sites


def _r1_plus_sites(d):
    return [
        MoveDescriptor("R1+", (a, side, over))
        for a in d.arcs + d.free_circles
        for side in (0, 1)
        for over in (0, 1)
    ]


def _r2_plus_sites(d, fc):
    sites = []
    for face in fc.faces:
        darts = [dart for dart in face if dart[0] == "a"]
        for i, dx in enumerate(darts):
            for dy in darts[i + 1:]:
                if dx[1] == dy[1]:
                    continue
                for over in (1, 0):
                    sites.append(MoveDescriptor("R2+", (dx[1], dx[2], dy[1], dy[2], over)))
    return sites


def _r5_plus_sites(d, fc):
    sites = []
    if d.boundary_count == 0:
        for a in d.arcs:
            for sgn in (1, -1):
                sites.append(MoveDescriptor("R5+", (a, sgn, -1)))
        return sites
    m = d.boundary_count
    for g in range(m):
        face = fc.faces[fc.face_of[("b", (g + d.n) % m, 1)]]
        for dart in face:
            if dart[0] == "a":
                sites.append(MoveDescriptor("R5+", (dart[1], dart[2], g)))
    return sites


# ----------------------------------------------------------------------
# application


def apply_move(d: ProjectiveDiagram, m: MoveDescriptor) -> ProjectiveDiagram:
    try:
        handler = _HANDLERS[m.kind]
    except KeyError:
        raise MoveError(f"unknown move kind {m.kind!r}") from None
    try:
        return handler(d, tuple(m.site))
    except (KeyError, ValueError, IndexError, TypeError) as exc:
        if isinstance(exc, MoveError):
            raise
        raise MoveError(f"{m.kind} site {m.site} does not exist ({exc})") from None


def _apply_r1_minus(d, site):
    (cid,) = site
    if MoveDescriptor("R1-", site) not in _r1_minus_sites(d):
        raise MoveError(f"no kink at {cid}")
    pg = PortGraph.of(d)
    _virtualize(pg, [cid])
    return pg.build()


def _apply_r2_minus(d, site):
    if MoveDescriptor("R2-", tuple(site)) not in _r2_minus_sites(d, _Faces(d)):
        raise MoveError(f"no R2 bigon at {site}")
    pg = PortGraph.of(d)
    _virtualize(pg, site)
    return pg.build()


def _apply_r3(d, site):
    fc = _Faces(d)
    face = next((f for f in fc.faces if _triangle(d, fc, f) == tuple(site)), None)
    if face is None:
        raise MoveError(f"no R3 triangle on arcs {site}")
    pg = PortGraph.of(d)
    sides = [d.arc_ends[dart[1]] for dart in face]
    _drop_arcs(pg, [dart[1] for dart in face], d)
    sub = {}
    new = []
    for s, e in sides:
        p, a = s[1], s[2]
        q, b = e[1], e[2]
        sub[("x", p, (a + 2) % 4)] = ("x", q, b)
        sub[("x", q, (b + 2) % 4)] = ("x", p, a)
        new.append((("x", q, (b + 2) % 4), ("x", p, (a + 2) % 4)))
    _substitute(pg, sub)
    for s, e in new:
        pg.add(s, e)
    return pg.build()


def _apply_r4(d, site):
    cid, i = site
    fc = _Faces(d)
    hit = _r4_face(d, fc, i)
    if hit is None or hit[0] != cid:
        raise MoveError(f"crossing {cid} is not next to wall gap {i}")
    m, n = d.boundary_count, d.n
    k = hit[1]
    c = d.crossing_map[cid]
    alpha, beta = c.slots[k], c.slots[(k + 1) % 4]
    p_over = k % 2 == 1  # strand P uses slots k, k+2
    alpha_out = d.arc_ends[alpha][0] == ("x", cid, k)
    beta_out = d.arc_ends[beta][0] == ("x", cid, (k + 1) % 4)
    j0, j1 = (i + n) % m, (i + n + 1) % m
    pg = PortGraph(m, [], {c.id: 0 for c in d.crossings}, list(d.free_circles), [])
    new_id = cid
    p_over_after = (not p_over) if R4_FLIPS_OVER else p_over
    # new crossing slots: 0 -> end i+n, 1 -> end i+n+1, 2 -> Q' side, 3 -> P' side
    pg.under[new_id] = 0 if p_over_after else 1
    sub = {
        ("x", cid, (k + 2) % 4): ("w", (i + 1) % m),
        ("x", cid, (k + 3) % 4): ("w", i),
        ("w", j0): ("x", new_id, 3),
        ("w", j1): ("x", new_id, 2),
    }
    for label, (s, e) in d.arc_ends.items():
        if label in (alpha, beta):
            continue
        pg.add(sub.get(s, s), sub.get(e, e))
    q_short = (("w", j0), ("x", new_id, 0))
    pg.add(*(q_short if beta_out else q_short[::-1]))
    p_short = (("w", j1), ("x", new_id, 1))
    pg.add(*(p_short if alpha_out else p_short[::-1]))
    return pg.build()


def _apply_r5_minus(d, site):
    (j,) = site
    fc = _Faces(d)
    label = _r5_uturn(d, fc, j)
    if label is None:
        raise MoveError(f"no u-turn at wall gap {j}")
    m, n = d.boundary_count, d.n
    pg = PortGraph.of(d)
    _drop_arcs(pg, [label], d)
    join = ("v", "r5")
    _substitute(pg, {("w", (j + n) % m): join, ("w", (j + n + 1) % m): join})
    gone = {j, (j + 1) % m, (j + n) % m, (j + n + 1) % m}
    renumber_wall(pg, set(range(m)) - gone)
    return pg.build()


def _apply_r1_plus(d, site):
    label, side, over = site
    pg = PortGraph.of(d)
    cid = fresh_crossing_id(pg, "c")
    pg.under[cid] = 1 if over else 0
    if label in d.free_circles and label not in d.arc_ends:
        # a kinked circle: both arcs run between the new crossing's slots
        pg.circles.remove(label)
        s = e = ("v", "kink")
    else:
        s, e = d.arc_ends[label]
        _drop_arcs(pg, [label], d)
    pg.add(s, ("x", cid, 2))
    if side == 0:
        pg.add(("x", cid, 0), ("x", cid, 1))
        pg.add(("x", cid, 3), e)
    else:
        pg.add(("x", cid, 0), ("x", cid, 3))
        pg.add(("x", cid, 1), e)
    return pg.build()


def _chain(pg, ports, forward):
    """Add arcs joining consecutive port pairs, reversed if not ``forward``."""
    for s, e in ports:
        pg.add(s, e) if forward else pg.add(e, s)


def _apply_r2_plus(d, site):
    xl, xdir, yl, ydir, over = site
    fc = _Faces(d)
    dx, dy = ("a", xl, xdir), ("a", yl, ydir)
    if xl == yl or fc.face_of[dx] != fc.face_of[dy]:
        raise MoveError("R2+ needs two distinct arcs on one face")
    t0, t1 = fc.tail(dx), fc.head(dx)
    u0, u1 = fc.tail(dy), fc.head(dy)
    pg = PortGraph.of(d)
    _drop_arcs(pg, [xl, yl], d)
    x = fresh_crossing_id(pg, "c")
    pg.under[x] = 0
    y = fresh_crossing_id(pg, "c")
    parity = 0 if over else 1
    pg.under[x] = pg.under[y] = parity
    _chain(pg, [(t0, ("x", x, 2)), (("x", x, 0), ("x", y, 2)), (("x", y, 0), t1)], xdir == 1)
    _chain(pg, [(u0, ("x", y, 1)), (("x", y, 3), ("x", x, 3)), (("x", x, 1), u1)], ydir == 1)
    return pg.build()


def _apply_r5_plus(d, site):
    label, sgn, gap = site
    fc = _Faces(d)
    dart = ("a", label, sgn)
    m, n = d.boundary_count, d.n
    if m == 0:
        if gap != -1:
            raise MoveError("wall-free diagrams take gap -1")
        slots = [("A",), ("B",), ("A'",), ("B'",)]
    else:
        near = (gap + n) % m
        if fc.face_of[dart] != fc.face_of[("b", near, 1)]:
            raise MoveError(f"arc {label} does not face wall gap {near}")
        slots = []
        for j in range(m):
            slots.append(("old", j))
            if j == near:
                slots += [("A",), ("B",)]
            if j == gap:
                slots += [("A'",), ("B'",)]
    pos = {s: k for k, s in enumerate(slots)}
    mapping = {s[1]: k for s, k in pos.items() if s[0] == "old"}
    t0, t1 = fc.tail(dart), fc.head(dart)
    pg = PortGraph.of(d)
    _drop_arcs(pg, [label], d)

    def fix(p):
        return ("w", mapping[p[1]]) if p[0] == "w" else p

    pg.arcs = [(fix(s), fix(e)) for s, e in pg.arcs]
    t0, t1 = fix(t0), fix(t1)
    pg.boundary_count = m + 4
    wa, wb = ("w", pos[("A",)]), ("w", pos[("B",)])
    wa2, wb2 = ("w", pos[("A'",)]), ("w", pos[("B'",)])
    _chain(pg, [(t0, wb), (wb2, wa2), (wa, t1)], sgn == 1)
    return pg.build()


_HANDLERS = {
    "R1-": _apply_r1_minus,
    "R1+": _apply_r1_plus,
    "R2-": _apply_r2_minus,
    "R2+": _apply_r2_plus,
    "R3": _apply_r3,
    "R4": _apply_r4,
    "R5-": _apply_r5_minus,
    "R5+": _apply_r5_plus,
}


# ----------------------------------------------------------------------
# search


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth_reached: int = 0
    rounds: list = field(default_factory=list)


def search_affine_reduction(
    d: ProjectiveDiagram,
    max_depth: int = 8,
    max_nodes: int = 4000,
    stats: SearchStats | None = None,
) -> ReductionCertificate | None:
    """Best-first search for a move sequence ending with no wall passages.

    Depth caps are tried in increasing order so that larger budgets only
    ever extend the explored prefix.
    """
    stats = stats if stats is not None else SearchStats()
    if d.boundary_count == 0:
        return ReductionCertificate((), d)
    for depth in range(1, max_depth + 1):
        found = _best_first(d, depth, max_nodes, stats)
        stats.rounds.append(depth)
        if found is not None:
            return found
    return None


def _best_first(d, depth_cap, max_nodes, stats):
    counter = 0
    start = canonical_code(d)
    heap = [((d.boundary_count, len(d.crossings), 0), counter, d, ())]
    seen = {start}
    expanded = 0
    while heap and expanded < max_nodes:
        (_b, _c, depth), _k, cur, path = heapq.heappop(heap)
        expanded += 1
        stats.nodes += 1
        if depth >= depth_cap:
            continue
        for mv in applicable_moves(cur, insertion_cap=0):
            nxt = apply_move(cur, mv)
            code = canonical_code(nxt)
            if code in seen:
                continue
            seen.add(code)
            new_path = path + (mv,)
            stats.max_depth_reached = max(stats.max_depth_reached, depth + 1)
            if nxt.boundary_count == 0:
                return ReductionCertificate(new_path, nxt)
            counter += 1
            heapq.heappush(
                heap, ((nxt.boundary_count, len(nxt.crossings), depth + 1), counter, nxt, new_path)
            )
    return None
