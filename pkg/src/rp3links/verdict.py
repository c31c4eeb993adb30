"""Three-valued affineness decision with checkable evidence.

Necessary conditions (homology class, self-linking, exponents mod 4) can
only refute; a wall-free diagram reached by moves or a proven element of
order 2 in the complement group confirms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from rp3links.covering import self_linking
from rp3links.diagram import ProjectiveDiagram, component_decomposition
from rp3links.group import (
    GroupPresentation,
    Order2Certificate,
    find_order2_witness,
    fundamental_group_presentation,
)
from rp3links.invariants import component_v, homology_class, jones_v, mod4_violation
from rp3links.moves import ReductionCertificate, SearchStats, search_affine_reduction

AFFINE = "AFFINE"
NOT_AFFINE = "NOT_AFFINE"
UNKNOWN = "UNKNOWN"

EXIT_CODES = {AFFINE: 0, NOT_AFFINE: 3, UNKNOWN: 4}


@dataclass(frozen=True)
class Budget:
    moves_depth: int = 8
    moves_nodes: int = 3000
    group_word_len: int = 2
    group_nodes: int = 20_000
    group_degree: int = 3


@dataclass(frozen=True)
class ObstructionReport:
    kind: str  # HOMOLOGY, SELF_LINKING or MOD4
    component: str
    value: object

    def to_json(self) -> dict:
        value = list(self.value) if isinstance(self.value, tuple) else self.value
        return {"type": "obstruction", "kind": self.kind, "component": self.component, "value": value}


@dataclass
class Verdict:
    status: str
    certificate: object = None
    budget_used: dict = field(default_factory=dict)
    presentation: GroupPresentation | None = None
    notes: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        cert = None
        if self.certificate is not None:
            cert = self.certificate.to_json()
            if isinstance(self.certificate, Order2Certificate) and self.presentation is not None:
                cert["presentation"] = self.presentation.to_json()
        out = {"status": self.status, "certificate": cert, "budget_used": dict(self.budget_used)}
        if self.notes:
            out["notes"] = dict(self.notes)
        return out


def obstruction(d: ProjectiveDiagram) -> ObstructionReport | None:
    """First necessary condition violated, in the order homology, sl, mod 4."""
    comps = component_decomposition(d)
    for c in comps:
        if homology_class(d, c):
            return ObstructionReport("HOMOLOGY", c.id, 1)
    for c in comps:
        sl = self_linking(d, c).value
        if sl:
            return ObstructionReport("SELF_LINKING", c.id, sl)
    for cid, v in component_v(d).items():
        pair = mod4_violation(v.poly)
        if pair is not None:
            return ObstructionReport("MOD4", cid, pair)
    return None


def decide_affine(d: ProjectiveDiagram, budget: Budget | None = None) -> Verdict:
    budget = budget or Budget()
    used = {"move_nodes": 0, "move_depth": 0, "group_search": False}
    found = obstruction(d)
    if found is not None:
        return Verdict(NOT_AFFINE, found, used)

    notes = {}
    comps = component_decomposition(d)
    if len(comps) > 1:
        # whole-link exponent test: informational only
        notes["whole_link_mod4"] = mod4_violation(jones_v(d).poly) is None

    stats = SearchStats()
    cert = search_affine_reduction(d, budget.moves_depth, budget.moves_nodes, stats)
    used["move_nodes"] = stats.nodes
    used["move_depth"] = stats.rounds[-1] if stats.rounds else 0
    if cert is not None:
        return Verdict(AFFINE, cert, used, notes=notes)

    p = fundamental_group_presentation(d)
    used["group_search"] = True
    witness = find_order2_witness(
        p,
        max_word_len=budget.group_word_len,
        max_nodes=budget.group_nodes,
        max_degree=budget.group_degree,
    )
    if witness is not None:
        return Verdict(AFFINE, witness, used, presentation=p, notes=notes)
    return Verdict(UNKNOWN, None, used, notes=notes)


def replay_verdict(d: ProjectiveDiagram, verdict: Verdict) -> bool:
    """Check the evidence behind a verdict."""
    from rp3links.certificates import replay_order2, replay_reduction

    if verdict.status == UNKNOWN:
        return verdict.certificate is None
    cert = verdict.certificate
    if verdict.status == NOT_AFFINE:
        return isinstance(cert, ObstructionReport) and obstruction(d) == cert
    if isinstance(cert, ReductionCertificate):
        return replay_reduction(d, cert).ok
    if isinstance(cert, Order2Certificate):
        return replay_order2(fundamental_group_presentation(d), cert).ok
    return False
