"""Combinatorial diagrams of links in RP³ and affineness certificates."""

from rp3links.diagram import (
    Crossing,
    DiagramError,
    LinkComponent,
    ProjectiveDiagram,
    ValidationReport,
    WallPassage,
    canonical_code,
    component_decomposition,
    delete_components,
    parse_diagram,
    serialize,
    validate,
)

__all__ = [
    "Crossing",
    "DiagramError",
    "LinkComponent",
    "ProjectiveDiagram",
    "ValidationReport",
    "WallPassage",
    "canonical_code",
    "component_decomposition",
    "delete_components",
    "parse_diagram",
    "serialize",
    "validate",
]
