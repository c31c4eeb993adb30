import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_wall_free
from oracles import normal_relator, wirtinger_presentation
from rp3links.certificates import replay_order2
from rp3links.diagram import component_decomposition
from rp3links.group import (
    WALL_GENERATOR,
    GroupPresentation,
    Order2Certificate,
    abelianization,
    classical_presentation,
    count_homomorphisms,
    find_finite_quotients,
    find_order2_witness,
    fundamental_group_presentation,
    invert,
    overarc_generators,
    reduce_word,
    smith_normal_form,
    word_from_json,
    word_to_json,
)

H2 = GroupPresentation(("h",), ((("h", 1), ("h", 1)),))
FREE1 = GroupPresentation(("x",), ())
XH = GroupPresentation(("x", "h"), ((("h", 1), ("h", 1)),))

words = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1])), max_size=10)


@given(words)
def test_reduce_and_invert(w):
    r = reduce_word(w)
    assert all(r[i] != (r[i + 1][0], -r[i + 1][1]) for i in range(len(r) - 1))
    assert reduce_word(tuple(w) + invert(w)) == ()
    assert word_from_json(word_to_json(r)) == r


@pytest.mark.parametrize(
    "m, diag",
    [([[2]], [2]), ([[2, 0], [0, 3]], [1, 6]), ([[1, 0], [0, 0]], [1, 0]), ([[4, 6], [6, 9], [2, 3]], [1, 0])],
)
def test_smith_normal_form(m, diag):
    d, u, v = smith_normal_form(m)
    assert d == diag
    # U M V is diagonal with entries d
    um = [[sum(u[i][k] * m[k][j] for k in range(len(m))) for j in range(len(m[0]))] for i in range(len(m))]
    umv = [[sum(um[i][k] * v[k][j] for k in range(len(v))) for j in range(len(v[0]))] for i in range(len(um))]
    for i, row in enumerate(umv):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j else 0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_divisibility(m):
    d, _, _ = smith_normal_form(m)
    nonzero = [x for x in d if x]
    assert d[: len(nonzero)] == nonzero
    assert all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


def test_abelianizations(fixtures):
    assert (abelianization(H2).rank, abelianization(H2).torsion) == (0, (2,))
    e1 = abelianization(fundamental_group_presentation(fixtures["unknot-affine"]))
    assert (e1.rank, e1.torsion) == (1, (2,))
    chord = abelianization(fundamental_group_presentation(fixtures["rp1-chord"]))
    assert (chord.rank, chord.torsion) == (1, ())


def test_homomorphism_counts():
    assert count_homomorphisms(H2, 2) == 2
    assert count_homomorphisms(FREE1, 2) == 2
    assert count_homomorphisms(XH, 2) == 4
    assert count_homomorphisms(FREE1, 3) == 6


def test_trefoil_quotients(fixtures):
    p = classical_presentation(fixtures["trefoil-affine"])
    # the trefoil group maps onto S3 (one surjective class) besides cyclic images
    assert count_homomorphisms(p, 3) == 6 + 6
    found = find_finite_quotients(p, 3)
    assert found.complete
    for rep in found.representations:
        for r in p.relators:
            assert rep.image(r) == (0, 1, 2)


def test_order2_witnesses(fixtures):
    cert = find_order2_witness(H2, max_word_len=1)
    assert cert is not None and cert.witness == (("h", 1),)
    assert find_order2_witness(FREE1, max_word_len=3) is None
    p = fundamental_group_presentation(fixtures["unknot-affine"])
    cert = find_order2_witness(p, max_word_len=1)
    assert cert.witness == ((WALL_GENERATOR, 1),)
    assert replay_order2(p, cert).ok


def test_two_passage_unknot_has_order2(fixtures):
    p = fundamental_group_presentation(fixtures["unknot-two-passages"])
    cert = find_order2_witness(p, max_word_len=2)
    assert cert is not None
    assert replay_order2(p, cert).ok
    assert replay_order2(p.to_json(), Order2Certificate.from_json(cert.to_json())).ok


def test_replay_rejects_tampering(fixtures):
    p = fundamental_group_presentation(fixtures["unknot-affine"])
    cert = find_order2_witness(p, max_word_len=1)
    data = cert.to_json()
    data["witness"] = [["x1", 1]]
    assert not replay_order2(p, Order2Certificate.from_json(data)).ok
    data = cert.to_json()
    data["quotient"]["images"]["h"] = list(range(data["quotient"]["degree"]))
    assert not replay_order2(p, Order2Certificate.from_json(data)).ok


def _structure_matches(d):
    p = fundamental_group_presentation(d)
    gen = overarc_generators(d)
    og, orels = wirtinger_presentation([c.slots for c in d.crossings])
    rename = {og[a]: gen[a] for a in og}
    if len(set(rename.values())) != len(rename):
        return False
    classical = sorted(normal_relator([(rename[g], e) for g, e in r]) for r in orels if r)
    classical.append(normal_relator(((WALL_GENERATOR, 1), (WALL_GENERATOR, 1))))
    n_gens = len(set(gen.values())) + len(d.free_circles) + 1
    return (
        len(p.generators) == n_gens
        and WALL_GENERATOR in p.generators
        and sorted(normal_relator(r) for r in p.relators) == sorted(classical)
    )


def test_free_product_structure_fixtures(fixtures):
    for name, d in fixtures.items():
        if d.boundary_count == 0:
            assert _structure_matches(d), name


def test_free_product_structure_random():
    rng = random.Random(21)
    for _ in range(80):
        d = random_wall_free(rng, 7)
        assert _structure_matches(d)
        ab = abelianization(fundamental_group_presentation(d))
        assert (ab.rank, ab.torsion) == (len(component_decomposition(d)), (2,))


def test_chord_group_has_no_short_order2(fixtures):
    p = fundamental_group_presentation(fixtures["rp1-chord"])
    assert find_order2_witness(p, max_word_len=3) is None


def test_classical_rejects_walls(fixtures):
    with pytest.raises(ValueError):
        classical_presentation(fixtures["rp1-chord"])


def test_presentation_json_roundtrip(fixtures):
    for d in fixtures.values():
        p = fundamental_group_presentation(d)
        assert GroupPresentation.from_json(p.to_json()) == p


def test_bad_relator_letter():
    with pytest.raises(ValueError):
        GroupPresentation(("x",), ((("y", 1),),))
