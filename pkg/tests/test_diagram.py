import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_wall_free, scramble
from rp3links.diagram import (
    DiagramError,
    canonical_code,
    component_decomposition,
    euler_characteristic,
    parse_diagram,
    serialize,
    validate,
)

E2 = "boundary 2\nwall 0 head a\nwall 1 tail a\n"


def test_empty_diagram():
    d = parse_diagram("boundary 0")
    assert validate(d).ok
    assert validate(d).euler_characteristic == 2
    assert component_decomposition(d) == []


def test_comments_and_blank_lines():
    d = parse_diagram("# chord\n\nboundary 2   # two endpoints\nwall 0 head a\nwall 1 tail a\n")
    assert d.boundary_count == 2 and d.arcs == ("a",)


def test_rp1_chord_component():
    d = parse_diagram(E2)
    (c,) = component_decomposition(d)
    assert c.wall_passage_count == 1
    assert c.cycle == ("a",)


def test_two_passage_unknot(fixtures):
    d = fixtures["unknot-two-passages"]
    (c,) = component_decomposition(d)
    assert c.wall_passage_count == 2
    assert sorted(c.cycle) == ["a", "b"]


def test_trefoil_signs(fixtures):
    d = fixtures["trefoil-affine"]
    assert len(set(d.signs.values())) == 1
    assert len(component_decomposition(d)) == 1


def test_hopf_two_components(fixtures):
    assert len(component_decomposition(fixtures["hopf-affine"])) == 2


def test_all_fixtures_validate(fixtures):
    for name, d in fixtures.items():
        report = validate(d)
        assert report.ok, (name, report.errors)
        assert report.euler_characteristic == 2


@pytest.mark.parametrize(
    "text, code",
    [
        ("boundary 3\nwall 0 head a\nwall 1 tail a\nwall 2 head b\n", "BAD_BOUNDARY"),
        ("boundary 2\nwall 0 head a\nwall 2 tail a\n", "ENDPOINT_RANGE"),
        ("boundary 2\nwall 0 head a\nwall 0 tail a\n", "DUPLICATE_ENDPOINT"),
        ("boundary 2\nwall 0 head a\n", "MISSING_ENDPOINT"),
        ("boundary 2\nwall 0 head a\nwall 1 head a\n", "CONTINUATION_MISMATCH"),
        ("boundary 0\ncircle c\ncircle c\n", "DUPLICATE_CIRCLE"),
        ("boundary 0\ncross a 1 2 3 4\n", "ARC_MULTIPLICITY"),
    ],
)
def test_structural_errors(text, code):
    report = validate(parse_diagram(text, strict=False))
    assert not report.ok
    assert code in [c for c, _ in report.errors]
    with pytest.raises(DiagramError) as exc:
        parse_diagram(text)
    assert exc.value.code == report.errors[0][0]


def test_duplicate_crossing_id():
    text = "boundary 0\ncross a 1 2 2 1\ncross a 3 4 4 3\n"
    report = validate(parse_diagram(text, strict=False))
    assert "DUPLICATE_CROSSING" in [c for c, _ in report.errors]


def test_nonplanar_rotation_rejected():
    # the standard trefoil code with one crossing's rotation reversed
    text = "boundary 0\ncross a 1 4 2 5\ncross b 3 6 4 1\ncross c 5 3 6 2\n"
    report = validate(parse_diagram(text, strict=False))
    assert not report.ok


@pytest.mark.parametrize(
    "text",
    ["boundary", "boundary x", "cross a 1 2 3", "wall 0 middle a", "knot a", "boundary 0\nboundary 0"],
)
def test_syntax_errors(text):
    with pytest.raises(DiagramError) as exc:
        parse_diagram(text, strict=False)
    assert exc.value.code == "SYNTAX"
    assert exc.value.line is not None


def test_roundtrip_fixtures(fixtures):
    for d in fixtures.values():
        assert parse_diagram(serialize(d)) == d


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 4))
def test_roundtrip_random(seed, steps):
    rng = random.Random(seed)
    d, _ = scramble(rng, random_wall_free(rng, 6), steps)
    assert validate(d).ok
    e = parse_diagram(serialize(d))
    assert e == d
    assert euler_characteristic(e) == 2


def test_canonical_code_ignores_labels():
    a = parse_diagram("boundary 0\ncross x 1 4 2 5\ncross y 3 6 4 1\ncross z 5 2 6 3\n")
    b = parse_diagram("boundary 0\ncross p q t r u\ncross s v w t q\ncross k u r w v\n")
    assert canonical_code(a) == canonical_code(b)


def test_passage_count_matches_heads(rng):
    for _ in range(30):
        d, _ = scramble(rng, random_wall_free(rng, 6), 3)
        heads = {w.arc for w in d.wall_passages if w.role == "head"}
        for c in component_decomposition(d):
            assert c.wall_passage_count == len(heads & set(c.cycle))
