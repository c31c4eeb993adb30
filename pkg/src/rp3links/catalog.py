"""Named example diagrams shipped with the package."""

from __future__ import annotations

from importlib import resources

from rp3links.diagram import ProjectiveDiagram, parse_diagram

NAMES = (
    "unknot-affine",
    "rp1-chord",
    "unknot-two-passages",
    "trefoil-affine",
    "hopf-affine",
    "2_1",
    "5_2",
    "5_9",
)


def available() -> list[str]:
    """Fixture names whose source file is present."""
    root = resources.files("rp3links") / "fixtures"
    return [name for name in NAMES if (root / f"{name}.pld").is_file()]


def source(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    path = resources.files("rp3links") / "fixtures" / f"{name}.pld"
    if not path.is_file():
        raise KeyError(f"fixture {name!r} has no diagram yet")
    return path.read_text(encoding="utf-8")


def load(name: str) -> ProjectiveDiagram:
    return parse_diagram(source(name))


def wall_free() -> list[str]:
    return [name for name in available() if load(name).boundary_count == 0]
