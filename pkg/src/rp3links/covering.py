"""Preimage of a projective link under the two-fold cover S³ -> RP³.

The sphere diagram is assembled from two copies of the disk: the inner
copy verbatim and the outer copy as the image under the antipodal map.
The antipodal map reverses the planar rotation and flips the fibre
coordinate, so the outer copy is mirrored *and* has over/under exchanged;
crossing signs are therefore the same in both copies.
"""

from __future__ import annotations

from dataclasses import dataclass

from rp3links.diagram import (
    DiagramError,
    LinkComponent,
    PortGraph,
    ProjectiveDiagram,
    component_decomposition,
    component_of_arc,
    delete_components,
)
from rp3links.invariants import homology_class

# Set to False to keep over/under in the outer copy (mirror only).
OUTER_COPY_FLIPS_OVER = True


class NotNullHomologous(ValueError):
    code = "NOT_NULL_HOMOLOGOUS"


@dataclass(frozen=True)
class ClassicalDiagram:
    diagram: ProjectiveDiagram
    origin: dict[str, tuple[str, str]]
    arc_origin: dict[str, tuple[tuple[str, str], ...]]

    @property
    def crossings(self):
        return self.diagram.crossings

    @property
    def components(self) -> list[str]:
        return list(self.origin)

    def sheets(self, base_component: str) -> list[str]:
        order = {"+": 0, "-": 1, "double": 2}
        found = [(order[s], lid) for lid, (b, s) in self.origin.items() if b == base_component]
        return [lid for _k, lid in sorted(found)]


@dataclass(frozen=True)
class SelfLinking:
    component: str
    value: int


def _outer_slot(k: int) -> int:
    return (-k) % 4


def lift_to_sphere(d: ProjectiveDiagram) -> ClassicalDiagram:
    pg = PortGraph(0)
    for c in d.crossings:
        pg.under[c.id + "+"] = 0
    for c in d.crossings:
        pg.under[c.id + "-"] = 1 if OUTER_COPY_FLIPS_OVER else 0

    def copy_port(port, sheet):
        if port[0] == "x":
            if sheet == "+":
                return ("x", port[1] + "+", port[2])
            return ("x", port[1] + "-", _outer_slot(port[2]))
        if sheet == "+":
            return ("v", port[1])
        # outer copy of endpoint j sits at the angle of endpoint j + n
        return ("v", (port[1] + d.n) % d.boundary_count)

    for label, (s, e) in d.arc_ends.items():
        for sheet in "+-":
            pg.add(copy_port(s, sheet), copy_port(e, sheet), (label, sheet))
    lifted, provenance = pg.build_with_origin()

    base_of = component_of_arc(d)
    comps = component_decomposition(d)
    klass = {c.id: homology_class(d, c) for c in comps}
    first_arc = {c.id: c.cycle[0] for c in comps if c.cycle}
    origin: dict[str, tuple[str, str]] = {}
    arc_origin = {}
    for comp in component_decomposition(lifted):
        if comp.cycle:
            tags = [t for a in comp.cycle for t in provenance[a]]
            for a in comp.cycle:
                arc_origin[a] = provenance[a]
        else:
            tags = list(provenance[comp.id])
        base = base_of[tags[0][0]]
        if klass[base]:
            sheet = "double"
        else:
            sheet = "+" if (first_arc[base], "+") in tags else "-"
        origin[comp.id] = (base, sheet)
    circles = list(lifted.free_circles)
    for c in d.free_circles:
        for sheet in "+-":
            label = _fresh_label(circles, c + sheet)
            circles.append(label)
            origin[label] = (c, sheet)
    lifted = ProjectiveDiagram(0, lifted.crossings, (), tuple(circles))
    return ClassicalDiagram(lifted, origin, arc_origin)


def _fresh_label(taken, want):
    while want in taken:
        want += "'"
    return want


def linking_number(cd: ClassicalDiagram, a: str, b: str) -> int:
    if a == b:
        raise ValueError("linking number needs two distinct components")
    for x in (a, b):
        if x not in cd.origin:
            raise DiagramError("UNKNOWN_COMPONENT", f"no lifted component {x!r}")
    d = cd.diagram
    owner = component_of_arc(d)
    total = 0
    for c in d.crossings:
        pair = {owner[c.slots[0]], owner[c.slots[1]]}
        if pair == {a, b}:
            total += d.signs[c.id]
    return total // 2


def self_linking(d: ProjectiveDiagram, c: LinkComponent) -> SelfLinking:
    if homology_class(d, c):
        raise NotNullHomologous(f"component {c.id} is not null-homologous")
    sub = delete_components(d, {c.id})
    (only,) = component_decomposition(sub)
    cd = lift_to_sphere(sub)
    plus, minus = cd.sheets(only.id)
    return SelfLinking(c.id, abs(linking_number(cd, plus, minus)))
