import random

from conftest import random_wall_free, scramble
from rp3links.diagram import parse_diagram
from rp3links.group import Order2Certificate, fundamental_group_presentation
from rp3links.moves import ReductionCertificate
from rp3links.verdict import (
    AFFINE,
    EXIT_CODES,
    NOT_AFFINE,
    UNKNOWN,
    Budget,
    ObstructionReport,
    decide_affine,
    obstruction,
    replay_verdict,
)


def test_exit_codes():
    assert EXIT_CODES == {AFFINE: 0, NOT_AFFINE: 3, UNKNOWN: 4}


def test_empty_diagram_affine():
    v = decide_affine(parse_diagram("boundary 0"))
    assert v.status == AFFINE
    assert isinstance(v.certificate, ReductionCertificate) and v.certificate.moves == ()


def test_chord_homology(fixtures):
    v = decide_affine(fixtures["rp1-chord"])
    assert v.status == NOT_AFFINE
    assert (v.certificate.kind, v.certificate.value) == ("HOMOLOGY", 1)
    assert v.exit_code == 3


def test_two_passage_unknot_affine(fixtures):
    v = decide_affine(fixtures["unknot-two-passages"])
    assert v.status == AFFINE
    assert isinstance(v.certificate, ReductionCertificate)
    assert replay_verdict(fixtures["unknot-two-passages"], v)


def test_figure_knots(fixtures):
    v = decide_affine(fixtures["2_1"])
    assert (v.status, v.certificate.kind, v.certificate.value) == (NOT_AFFINE, "SELF_LINKING", 2)
    v = decide_affine(fixtures["5_2"])
    assert (v.status, v.certificate.kind, v.certificate.value) == (NOT_AFFINE, "MOD4", (4, 2))
    assert v.to_json()["certificate"]["value"] == [4, 2]


def test_obstruction_recomputes(fixtures):
    for name, d in fixtures.items():
        v = decide_affine(d)
        if v.status == NOT_AFFINE:
            assert obstruction(d) == v.certificate
            assert replay_verdict(d, v)


def test_wall_free_fixtures_affine(fixtures):
    for name in ("unknot-affine", "trefoil-affine", "hopf-affine"):
        v = decide_affine(fixtures[name])
        assert v.status == AFFINE and v.certificate.moves == ()


def test_order2_branch_when_moves_disabled(fixtures):
    d = fixtures["unknot-two-passages"]
    v = decide_affine(d, Budget(moves_depth=0, group_word_len=2))
    assert v.status == AFFINE
    assert isinstance(v.certificate, Order2Certificate)
    assert v.budget_used["group_search"] is True
    assert "presentation" in v.to_json()["certificate"]
    assert replay_verdict(d, v)


def test_unknown_when_budgets_zero(fixtures):
    v = decide_affine(fixtures["unknot-two-passages"], Budget(moves_depth=0, group_word_len=0))
    assert v.status == UNKNOWN and v.certificate is None
    assert v.exit_code == 4
    assert v.to_json()["certificate"] is None


def test_whole_link_mod4_is_only_a_note():
    rng = random.Random(2)
    for _ in range(10):
        d = random_wall_free(rng, 5)
        d, _ = scramble(rng, d, 2)
        v = decide_affine(d)
        assert v.status != NOT_AFFINE
        if "whole_link_mod4" in v.notes:
            assert isinstance(v.notes["whole_link_mod4"], bool)


def test_tampered_obstruction_rejected(fixtures):
    d = fixtures["2_1"]
    v = decide_affine(d)
    v.certificate = ObstructionReport("SELF_LINKING", v.certificate.component, 4)
    assert not replay_verdict(d, v)


def test_monotone_budget():
    rng = random.Random(9)
    for _ in range(8):
        d, _ = scramble(rng, random_wall_free(rng, 5), 4)
        small = decide_affine(d, Budget(moves_depth=2, moves_nodes=100, group_word_len=1))
        large = decide_affine(d, Budget(moves_depth=8, moves_nodes=3000, group_word_len=2))
        if small.status != UNKNOWN:
            assert large.status == small.status


def test_presentation_attached_only_for_order2(fixtures):
    v = decide_affine(fixtures["unknot-two-passages"], Budget(moves_depth=0))
    assert v.presentation == fundamental_group_presentation(fixtures["unknot-two-passages"])
