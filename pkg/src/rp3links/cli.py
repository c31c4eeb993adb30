"""``plink``: command-line access to diagrams, invariants, groups and verdicts.

Diagram arguments are paths to ``.pld`` files, ``-`` for standard input,
or ``@name`` for a bundled fixture.
"""

from __future__ import annotations

import argparse
import json
import sys

from rp3links import catalog
from rp3links.certificates import replay_order2, replay_reduction
from rp3links.covering import NotNullHomologous, lift_to_sphere, self_linking
from rp3links.diagram import (
    DiagramError,
    component_decomposition,
    parse_diagram,
    serialize,
    validate,
)
from rp3links.group import (
    Order2Certificate,
    abelianization,
    find_finite_quotients,
    find_order2_witness,
    fundamental_group_presentation,
    word_str,
)
from rp3links.invariants import (
    CrossingBudgetExceeded,
    drobotukhina_bracket,
    homology_class,
    jones_v,
    mod4_violation,
    writhe,
)
from rp3links.moves import SearchStats, search_affine_reduction
from rp3links.verdict import Budget, decide_affine

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_source(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        return catalog.source(arg[1:])
    with open(arg, encoding="utf-8") as fh:
        return fh.read()


def _load(arg: str):
    return parse_diagram(_read_source(arg))


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# ----------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    d = parse_diagram(_read_source(args.file), strict=False)
    report = validate(d)
    lines = [f"ok: {str(report.ok).lower()}", f"euler: {report.euler_characteristic}"]
    lines += [f"{code}: {msg}" for code, msg in report.errors]
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_components(args) -> int:
    d = _load(args.file)
    comps = component_decomposition(d)
    payload = {
        "components": [
            {
                "id": c.id,
                "arcs": list(c.cycle),
                "wall_passages": c.wall_passage_count,
                "h1_class": homology_class(d, c),
            }
            for c in comps
        ]
    }
    text = "\n".join(
        f"{c.id}: passages {c.wall_passage_count}, class {homology_class(d, c)}, arcs {' '.join(c.cycle) or '-'}"
        for c in comps
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_invariants(args) -> int:
    d = _load(args.file)
    comps = component_decomposition(d)
    bracket = drobotukhina_bracket(d)
    v = jones_v(d)
    pair = mod4_violation(v.poly)
    payload = {
        "writhe": writhe(d),
        "h1_class": {c.id: homology_class(d, c) for c in comps},
        "bracket": bracket.to_json(),
        "V": v.to_json(),
        "mod4": {"ok": pair is None, "violation": list(pair) if pair else None},
    }
    text = "\n".join(
        [
            f"writhe: {writhe(d)}",
            "h1_class: " + ", ".join(f"{c.id}={homology_class(d, c)}" for c in comps),
            f"bracket: {bracket.poly} (epsilon={bracket.epsilon})",
            f"V: {v.poly} (epsilon={v.epsilon})",
            "mod4: " + ("ok" if pair is None else f"fails at exponents {pair[0]}, {pair[1]}"),
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_lift(args) -> int:
    d = _load(args.file)
    cd = lift_to_sphere(d)
    origin = {k: {"component": b, "sheet": s} for k, (b, s) in cd.origin.items()}
    text = serialize(cd.diagram) + "".join(
        f"# {k} <- {b} ({s})\n" for k, (b, s) in cd.origin.items()
    )
    _emit(args, {"diagram": serialize(cd.diagram), "origin": origin}, text.rstrip("\n"))
    return EXIT_OK


def cmd_sl(args) -> int:
    d = _load(args.file)
    comps = component_decomposition(d)
    if args.component:
        chosen = [c for c in comps if c.id == args.component]
        if not chosen:
            raise DiagramError("UNKNOWN_COMPONENT", f"no component {args.component!r}")
    else:
        chosen = comps
    values = {}
    for c in chosen:
        try:
            values[c.id] = self_linking(d, c).value
        except NotNullHomologous:
            if args.component:
                raise
            values[c.id] = None
    text = "\n".join(f"{k}: {'undefined (class 1)' if v is None else v}" for k, v in values.items())
    _emit(args, {"sl": values}, text)
    return EXIT_OK


def cmd_group(args) -> int:
    d = _load(args.file)
    p = fundamental_group_presentation(d)
    payload: dict = {"presentation": p.to_json()}
    lines = [str(p)]
    if args.abelianization:
        ab = abelianization(p)
        payload["abelianization"] = ab.to_json()
        lines.append(f"abelianization: {ab}")
    if args.quotients:
        found = find_finite_quotients(p, args.quotients)
        payload["quotients"] = {
            "degree": args.quotients,
            "complete": found.complete,
            "representations": [r.to_json() for r in found.representations],
        }
        lines.append(
            f"homomorphisms to S{args.quotients} up to conjugation: {len(found.representations)}"
            + ("" if found.complete else " (search incomplete)")
        )
    if args.find_order2:
        cert = find_order2_witness(p, max_word_len=args.max_word_len, max_nodes=args.max_nodes)
        payload["order2"] = cert.to_json() if cert else None
        lines.append("order-2 witness: " + (word_str(cert.witness) if cert else "none within budget"))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_simplify(args) -> int:
    d = _load(args.file)
    stats = SearchStats()
    cert = search_affine_reduction(d, max_depth=args.depth, max_nodes=args.nodes, stats=stats)
    if cert is None:
        _emit(args, {"certificate": None, "nodes": stats.nodes}, "no wall-free diagram within budget")
        return EXIT_FAILURE
    payload = cert.to_json()
    text = "\n".join([f"{m.kind} {' '.join(map(str, m.site))}" for m in cert.moves] + [str(cert.final).rstrip()])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_replay(args) -> int:
    d = _load(args.file)
    with open(args.certificate, encoding="utf-8") as fh:
        data = json.load(fh)
    if "status" in data:  # a full verdict
        data = data.get("certificate") or {}
    kind = data.get("type")
    if kind == "order2":
        pres = data.get("presentation") or fundamental_group_presentation(d).to_json()
        result = replay_order2(pres, Order2Certificate.from_json(data))
    elif kind == "reduction" or "moves" in data:
        result = replay_reduction(d, data)
    else:
        raise DiagramError("BAD_CERTIFICATE", "unrecognised certificate")
    _emit(args, result.to_json(), "replay ok" if result.ok else f"replay failed: {result.message}")
    return EXIT_OK if result.ok else EXIT_FAILURE


def cmd_decide(args) -> int:
    d = _load(args.file)
    budget = Budget(
        moves_depth=args.moves_depth,
        moves_nodes=args.moves_nodes,
        group_word_len=args.group_word_len,
    )
    verdict = decide_affine(d, budget)
    payload = verdict.to_json()
    cert = payload["certificate"]
    detail = ""
    if cert and cert.get("type") == "obstruction":
        detail = f" ({cert['kind']}, component {cert['component']}, value {cert['value']})"
    elif cert:
        detail = f" ({cert['type']})"
    _emit(args, payload, verdict.status + detail)
    return verdict.exit_code


def cmd_fixtures(args) -> int:
    if args.action == "list":
        names = catalog.available()
        _emit(args, {"fixtures": names}, "\n".join(names))
        return EXIT_OK
    if not args.name:
        raise DiagramError("USAGE", "fixtures emit needs a name")
    text = catalog.source(args.name)
    _emit(args, {"name": args.name, "source": text}, text.rstrip("\n"))
    return EXIT_OK


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plink", description="Projective link diagram toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, diagram=True):
        p = sub.add_parser(name, help=help_text)
        if diagram:
            p.add_argument("file", help="diagram file, '-' for stdin, or @fixture")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check a diagram and report its Euler characteristic")
    add("components", cmd_components, "list link components")
    add("invariants", cmd_invariants, "writhe, homology classes, bracket and V")
    add("lift", cmd_lift, "diagram of the preimage in the 3-sphere")
    p = add("sl", cmd_sl, "self-linking numbers of null-homologous components")
    p.add_argument("--component")
    p = add("group", cmd_group, "presentation of the complement group")
    p.add_argument("--abelianization", action="store_true")
    p.add_argument("--quotients", type=int, metavar="N")
    p.add_argument("--find-order2", action="store_true")
    p.add_argument("--max-word-len", type=int, default=2)
    p.add_argument("--max-nodes", type=int, default=20_000)
    p = add("simplify", cmd_simplify, "search moves to a wall-free diagram")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--nodes", type=int, default=3000)
    p = add("replay", cmd_replay, "check a reduction or order-2 certificate")
    p.add_argument("certificate")
    p = add("decide", cmd_decide, "decide whether the link is affine")
    p.add_argument("--moves-depth", type=int, default=Budget.moves_depth)
    p.add_argument("--moves-nodes", type=int, default=Budget.moves_nodes)
    p.add_argument("--group-word-len", type=int, default=Budget.group_word_len)
    p = add("fixtures", cmd_fixtures, "list or print bundled diagrams", diagram=False)
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    return parser


def run(argv) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DiagramError, CrossingBudgetExceeded, NotNullHomologous, KeyError, OSError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if getattr(args, "json", False):
            print(json.dumps({"error": {"code": code, "msg": msg}}, indent=2))
        else:
            print(f"error: {msg}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
