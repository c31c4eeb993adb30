"""Homology classes, writhe, the Drobotukhina bracket and the mod-4 test."""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from rp3links.diagram import (
    LinkComponent,
    ProjectiveDiagram,
    component_decomposition,
    delete_components,
)
from rp3links.laurent import DELTA, ONE, LaurentPolynomial

DEFAULT_MAX_CROSSINGS = 20

# Slot pairs joined by each smoothing.  Paired with the sign convention
# (over-strand s1 -> s3 is +1) so that (-A)^(-3w) cancels kinks.
A_SMOOTHING = ((0, 3), (1, 2))
B_SMOOTHING = ((0, 1), (2, 3))


class CrossingBudgetExceeded(RuntimeError):
    """The state sum would enumerate more crossings than allowed."""


@dataclass(frozen=True)
class BracketValue:
    poly: LaurentPolynomial
    epsilon: int

    def to_json(self) -> dict:
        return {"poly": self.poly.to_json(), "epsilon": self.epsilon}


@dataclass(frozen=True)
class StateCurves:
    choice: tuple[str, ...]
    contractible_count: int
    noncontractible_count: int


def homology_class(d: ProjectiveDiagram, c: LinkComponent) -> int:
    return c.wall_passage_count % 2


def writhe(d: ProjectiveDiagram) -> int:
    return sum(d.signs.values())


def _cap(max_crossings: int | None) -> int:
    if max_crossings is not None:
        return max_crossings
    env = os.environ.get("PLINK_MAX_CROSSINGS")
    return int(env) if env else DEFAULT_MAX_CROSSINGS


class _StateTracer:
    """Precomputed port indexing for repeated state resolution."""

    def __init__(self, d: ProjectiveDiagram):
        self.d = d
        ports = {}
        for s, e in d.arc_ends.values():
            for p in (s, e):
                ports[p] = len(ports)
        self.size = len(ports)
        self.arc_pairs = [(ports[s], ports[e]) for s, e in d.arc_ends.values()]
        self.wall_pairs = [
            (ports[("w", j)], ports[("w", j + d.n)]) for j in range(d.n)
        ]
        self.crossing_ports = [
            tuple(ports[("x", c.id, k)] for k in range(4)) for c in d.crossings
        ]

    def resolve(self, choice) -> tuple[int, int]:
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for a, b in self.arc_pairs:
            union(a, b)
        for a, b in self.wall_pairs:
            union(a, b)
        for slots, pick in zip(self.crossing_ports, choice):
            for i, j in A_SMOOTHING if pick == "A" else B_SMOOTHING:
                union(slots[i], slots[j])
        jumps: dict[int, int] = {}
        for a, _b in self.wall_pairs:
            r = find(a)
            jumps[r] = jumps.get(r, 0) + 1
        roots = {find(x) for x in range(self.size)}
        odd = sum(1 for r in roots if jumps.get(r, 0) % 2)
        return len(roots) - odd, odd


def resolve_state(d: ProjectiveDiagram, choice) -> StateCurves:
    """Trace the state circles of one smoothing assignment.

    ``choice`` lists ``"A"``/``"B"`` per crossing in diagram order.
    """
    choice = tuple(choice)
    if len(choice) != len(d.crossings):
        raise ValueError("choice must assign a smoothing to every crossing")
    t, odd = _StateTracer(d).resolve(choice)
    return StateCurves(choice, t + len(d.free_circles), odd)


def drobotukhina_bracket(
    d: ProjectiveDiagram, max_crossings: int | None = None
) -> BracketValue:
    """Unnormalized bracket: sum of A^(a-b) delta^(circles-1) over states."""
    cap = _cap(max_crossings)
    c = len(d.crossings)
    if c > cap:
        raise CrossingBudgetExceeded(f"{c} crossings exceeds the state-sum cap {cap}")
    if c == 0 and d.boundary_count == 0 and not d.free_circles:
        return BracketValue(ONE, 0)
    tracer = _StateTracer(d)
    tally: dict[tuple[int, int], int] = {}
    epsilon = None
    free = len(d.free_circles)
    for choice in product("AB", repeat=c):
        t, odd = tracer.resolve(choice)
        a = choice.count("A")
        key = (2 * a - c, t + free + odd - 1)
        tally[key] = tally.get(key, 0) + 1
        if epsilon is None:
            epsilon = odd
        elif epsilon != odd:
            raise AssertionError("states disagree on the noncontractible circle")
    powers = {}
    poly = LaurentPolynomial()
    for (shift, k), count in tally.items():
        if k not in powers:
            powers[k] = DELTA**k
        poly = poly + powers[k].shift(shift) * count
    return BracketValue(poly, epsilon)


def jones_v(d: ProjectiveDiagram, max_crossings: int | None = None) -> BracketValue:
    bracket = drobotukhina_bracket(d, max_crossings)
    w = writhe(d)
    factor = LaurentPolynomial.monomial(-3 * w, -1 if w % 2 else 1)
    return BracketValue(bracket.poly * factor, bracket.epsilon)


def mod4_violation(p: LaurentPolynomial) -> tuple[int, int] | None:
    """First pair of exponents (descending order) that differ mod 4."""
    exps = sorted(p.exponents(), reverse=True)
    for e in exps[1:]:
        if (e - exps[0]) % 4:
            return exps[0], e
    return None


def mod4_exponent_test(p: LaurentPolynomial) -> bool:
    """True iff all exponents are congruent mod 4 (vacuously for 0)."""
    return mod4_violation(p) is None


def component_v(
    d: ProjectiveDiagram, max_crossings: int | None = None
) -> dict[str, BracketValue]:
    """V of each component's own sub-diagram."""
    comps = component_decomposition(d)
    if len(comps) == 1:
        return {comps[0].id: jones_v(d, max_crossings)}
    return {c.id: jones_v(delete_components(d, {c.id}), max_crossings) for c in comps}
