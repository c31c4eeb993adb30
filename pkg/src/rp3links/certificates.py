"""Replay checks for reduction and order-2 certificates.

These checks deliberately share no word or permutation code with the
searches that produce certificates.
"""

from __future__ import annotations

from dataclasses import dataclass

from rp3links.diagram import DiagramError, ProjectiveDiagram, canonical_code, parse_diagram, validate


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    message: str = ""
    steps: int = 0

    def to_json(self) -> dict:
        return {"ok": self.ok, "message": self.message, "steps": self.steps}


def replay_reduction(d: ProjectiveDiagram, certificate) -> ReplayResult:
    """Apply every recorded move, validating each intermediate diagram."""
    from rp3links.diagram import component_decomposition
    from rp3links.moves import MoveDescriptor, apply_move

    data = certificate.to_json() if hasattr(certificate, "to_json") else certificate
    classes = sorted(c.wall_passage_count % 2 for c in component_decomposition(d))
    cur = d
    for k, raw in enumerate(data.get("moves", [])):
        move = raw if isinstance(raw, MoveDescriptor) else MoveDescriptor.from_json(raw)
        try:
            cur = apply_move(cur, move)
        except DiagramError as exc:
            return ReplayResult(False, f"step {k}: {exc}", k)
        if not validate(cur).ok:
            return ReplayResult(False, f"step {k}: intermediate diagram is invalid", k)
        now = sorted(c.wall_passage_count % 2 for c in component_decomposition(cur))
        if now != classes:
            return ReplayResult(False, f"step {k}: component classes changed", k)
    steps = len(data.get("moves", []))
    if cur.boundary_count != 0:
        return ReplayResult(False, "final diagram still meets the wall", steps)
    final = data.get("final")
    if final is not None:
        recorded = final if isinstance(final, ProjectiveDiagram) else parse_diagram(final)
        if canonical_code(recorded) != canonical_code(cur):
            return ReplayResult(False, "final diagram differs from the recorded one", steps)
    return ReplayResult(True, "", steps)


def _free_reduce(letters):
    out = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return out


def _letters(raw):
    return [(str(g), int(e)) for g, e in raw]


def replay_order2(presentation, certificate) -> ReplayResult:
    """Check ``w^2 = 1`` by the recorded insertions and ``phi(w) != 1``."""
    pdata = presentation.to_json() if hasattr(presentation, "to_json") else presentation
    cdata = certificate.to_json() if hasattr(certificate, "to_json") else certificate
    gens = set(pdata["generators"])
    relators = [_letters(r) for r in pdata["relators"]]
    witness = _letters(cdata["witness"])
    if not witness:
        return ReplayResult(False, "empty witness")
    if any(g not in gens or e not in (1, -1) for g, e in witness):
        return ReplayResult(False, "witness uses an undeclared letter")

    word = _free_reduce(witness + witness)
    steps = cdata["square_proof"]
    for k, step in enumerate(steps):
        idx, rot, pos = int(step["relator"]), int(step["rotation"]), int(step["position"])
        if not 0 <= idx < len(relators):
            return ReplayResult(False, f"step {k}: no relator {idx}", k)
        r = relators[idx]
        if not 0 <= rot < max(len(r), 1) or not 0 <= pos <= len(word):
            return ReplayResult(False, f"step {k}: position or rotation out of range", k)
        piece = r[rot:] + r[:rot]
        if step["inverted"]:
            piece = [(g, -e) for g, e in reversed(piece)]
        word = _free_reduce(word[:pos] + piece + word[pos:])
    if word:
        return ReplayResult(False, "square does not reduce to the empty word", len(steps))

    q = cdata["quotient"]
    degree = int(q["degree"])
    images = {g: list(map(int, p)) for g, p in q["images"].items()}
    if set(images) != gens:
        return ReplayResult(False, "quotient does not assign every generator", len(steps))
    for g, p in images.items():
        if sorted(p) != list(range(degree)):
            return ReplayResult(False, f"image of {g} is not a permutation", len(steps))

    def act(letters, point):
        for g, e in letters:
            p = images[g]
            point = p[point] if e == 1 else p.index(point)
        return point

    for r in relators:
        if any(act(r, x) != x for x in range(degree)):
            return ReplayResult(False, "quotient does not respect a relator", len(steps))
    if all(act(witness, x) == x for x in range(degree)):
        return ReplayResult(False, "witness maps to the identity", len(steps))
    return ReplayResult(True, "", len(steps))
