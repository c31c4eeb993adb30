"""Random diagrams from random polygonal curves in the disk model.

Each component is a closed polygon through random points of the open unit
disk.  An edge may *wrap*: it runs straight to a boundary point ``b`` and
continues from ``-b``.  Intersections become crossings with random
over/under data.
"""

from __future__ import annotations

import cmath
import math
import random

from rp3links.diagram import PortGraph, ProjectiveDiagram, validate


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def _segment_hit(p1, p2, q1, q2):
    r, s = p2 - p1, q2 - q1
    den = _cross(r, s)
    if abs(den) < 1e-14:
        return None
    t = _cross(q1 - p1, s) / den
    u = _cross(q1 - p1, r) / den
    if 1e-9 < t < 1 - 1e-9 and 1e-9 < u < 1 - 1e-9:
        return t, u
    return None


def _boundary_point(p: complex, direction: complex) -> complex:
    # p + s * direction on the unit circle, s > 0
    a = abs(direction) ** 2
    b = 2 * (p.real * direction.real + p.imag * direction.imag)
    c = abs(p) ** 2 - 1
    s = (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)
    return p + s * direction


def random_curves(rng: random.Random, sizes, wraps):
    """Return a list of closed curves, each a list of pieces.

    A piece is ``(start, end, start_on_wall, end_on_wall)``.
    """
    curves = []
    for m, w in zip(sizes, wraps):
        # a closed polygon needs three vertices unless it wraps
        m = max(m, w, 1 if w else 3)
        pts = [cmath.rect(0.85 * math.sqrt(rng.random()), rng.uniform(0, 2 * math.pi)) for _ in range(m)]
        wrap_edges = set(rng.sample(range(m), w)) if w else set()
        pieces = []
        for k in range(m):
            p, q = pts[k], pts[(k + 1) % m]
            if k in wrap_edges:
                direction = cmath.rect(1, rng.uniform(0, 2 * math.pi))
                b = _boundary_point(p, direction)
                pieces.append((p, b, False, True))
                pieces.append((-b, q, True, False))
            else:
                pieces.append((p, q, False, False))
        curves.append(pieces)
    return curves


def diagram_from_curves(rng: random.Random, curves) -> ProjectiveDiagram:
    flat = [(ci, pi, piece) for ci, pieces in enumerate(curves) for pi, piece in enumerate(pieces)]
    events: dict[tuple[int, int], list] = {(ci, pi): [] for ci, pi, _ in flat}
    pg = PortGraph()
    count = 0
    for a in range(len(flat)):
        for b in range(a + 1, len(flat)):
            ka, kb = flat[a][:2], flat[b][:2]
            (p1, p2, *_), (q1, q2, *_) = flat[a][2], flat[b][2]
            hit = _segment_hit(p1, p2, q1, q2)
            if hit is None:
                continue
            cid = f"c{count}"
            count += 1
            pg.under[cid] = 0
            under_first = rng.random() < 0.5
            du, do = (p2 - p1, q2 - q1) if under_first else (q2 - q1, p2 - p1)
            # slot 1 is the half-edge counterclockwise between under-in and under-out
            over_out_slot = 1 if _cross(-du, do) > 0 else 3
            ku, ko = (ka, kb) if under_first else (kb, ka)
            tu, to = (hit[0], hit[1]) if under_first else (hit[1], hit[0])
            events[ku].append((tu, ("x", cid, 0), ("x", cid, 2)))
            events[ko].append((to, ("x", cid, 4 - over_out_slot), ("x", cid, over_out_slot)))

    # wall endpoints: counterclockwise by angle
    wall_pts = []
    for ci, pieces in enumerate(curves):
        for pi, (s, e, s_wall, e_wall) in enumerate(pieces):
            if e_wall:
                wall_pts.append((cmath.phase(e) % (2 * math.pi), (ci, pi, "end")))
            if s_wall:
                wall_pts.append((cmath.phase(s) % (2 * math.pi), (ci, pi, "start")))
    wall_pts.sort()
    index = {key: i for i, (_ang, key) in enumerate(wall_pts)}
    pg.boundary_count = len(wall_pts)

    for ci, pieces in enumerate(curves):
        ports = []  # alternating (in, out) along the curve
        for pi, (_s, _e, s_wall, e_wall) in enumerate(pieces):
            if s_wall:
                ports.append(("out", ("w", index[(ci, pi, "start")])))
            for _t, pin, pout in sorted(events[(ci, pi)]):
                ports.append(("in", pin))
                ports.append(("out", pout))
            if e_wall:
                ports.append(("in", ("w", index[(ci, pi, "end")])))
        if not ports:
            pg.circles.append(f"o{ci}")
            continue
        # rotate so the list starts with an "out" port
        k = next(i for i, (kind, _p) in enumerate(ports) if kind == "out")
        ports = ports[k:] + ports[:k]
        for i in range(0, len(ports), 2):
            pg.add(ports[i][1], ports[(i + 1) % len(ports)][1])
    return pg.build()


def random_diagram(
    rng: random.Random,
    components: int = 1,
    points: int = 5,
    wraps: int = 0,
    max_crossings: int | None = None,
    tries: int = 1000,
) -> ProjectiveDiagram:
    """A random valid diagram; ``wraps`` is the wall-crossing count per component."""
    for _ in range(tries):
        sizes = [points] * components
        curves = random_curves(rng, sizes, [wraps] * components)
        d = diagram_from_curves(rng, curves)
        if max_crossings is not None and len(d.crossings) > max_crossings:
            continue
        if validate(d).ok:
            return d
    raise RuntimeError("could not generate a diagram within the crossing limit")
