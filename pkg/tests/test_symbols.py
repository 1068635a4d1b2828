"""Hilbert symbols (formula vs brute force), ramification sets, decision
tables, and their agreement with the constructive pipeline."""

import random
from fractions import Fraction

import pytest

from weildescent.errors import ZeroInput
from weildescent.fields import RATIONAL, SubfieldTag, field_make, tag_lift
from weildescent.symbols import (
    A_CLASSES,
    INF,
    compute_A_for_Q2,
    describe_subfield,
    hilbert_symbol,
    hilbert_symbol_bruteforce,
    is_square_in_Z2,
    p2_field_tables,
    product_formula_holds,
    quaternion_ramification,
    schur_index_decision,
)


def test_minus_one_minus_one_at_2():
    assert hilbert_symbol(-1, -1, 2) == -1


def test_trivial_first_argument():
    rng = random.Random(0)
    for _ in range(30):
        b = rng.choice([-1, 1]) * rng.randint(1, 50)
        v = rng.choice([2, 3, 5, 7, INF])
        assert hilbert_symbol(1, b, v) == 1
        assert hilbert_symbol(4, b, v) == 1  # squares are trivial


def test_2_3_at_3_and_bruteforce():
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol_bruteforce(2, 3, 3) == -1


def test_zero_input():
    with pytest.raises(ZeroInput):
        hilbert_symbol(0, 3, 5)
    with pytest.raises(ZeroInput):
        quaternion_ramification(1, 0)


def test_formula_matches_bruteforce_grid():
    vals = (-6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 10, 15)
    for a in vals:
        for b in vals:
            for v in (2, 3, 5, INF):
                assert hilbert_symbol(a, b, v) == hilbert_symbol_bruteforce(
                    a, b, v, 2
                ), (a, b, v)


def test_symbol_properties_random():
    rng = random.Random(1)
    places = [2, 3, 5, 7, 11, INF]
    for _ in range(200):
        a = rng.choice([-1, 1]) * rng.randint(1, 40)
        b = rng.choice([-1, 1]) * rng.randint(1, 40)
        c = rng.choice([-1, 1]) * rng.randint(1, 40)
        v = rng.choice(places)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a, b * c, v) == hilbert_symbol(
            a, b, v
        ) * hilbert_symbol(a, c, v)
        assert hilbert_symbol(a, -a, v) == 1
        if a != 1:
            assert hilbert_symbol(a, 1 - a, v) == 1


def test_symbol_rational_arguments():
    assert hilbert_symbol(Fraction(1, 2), Fraction(-1, 3), 2) == hilbert_symbol(
        2, -3, 2
    )


def test_product_formula_seeded():
    rng = random.Random(0)
    for _ in range(100):
        a = rng.choice([-1, 1]) * rng.randint(1, 60)
        b = rng.choice([-1, 1]) * rng.randint(1, 60)
        assert product_formula_holds(a, b)


def test_ramification_sets():
    assert quaternion_ramification(1, 7) == set()
    assert quaternion_ramification(-1, -1) == {2, INF}
    assert quaternion_ramification(-1, -3) == {3, INF}
    assert quaternion_ramification(-1, -7) == {7, INF}
    # (-1,-5) is ramified at {2, inf}: -1 is a square mod 5 (z = 7 solves
    # z^2 = -1 mod 25), so 5 splits; the algebra ramified at {5, inf} is
    # e.g. (-5, -3)
    assert quaternion_ramification(-1, -5) == {2, INF}
    assert quaternion_ramification(-5, -3) == {5, INF}


def test_ramification_even_and_no_double_squares():
    rng = random.Random(2)
    for _ in range(60):
        a = rng.choice([-1, 1]) * rng.randint(1, 30)
        b = rng.choice([-1, 1]) * rng.randint(1, 30)
        ram = quaternion_ramification(a, b)
        assert len(ram) % 2 == 0


def test_schur_index_decision_rows():
    r31 = schur_index_decision(3, 1)
    assert r31["char_field"]["name"] == "Q(sqrt(-3))"
    assert r31["odd"]["realisation_name"] == "Q(sqrt(-3))"
    assert r31["odd"]["schur_index"] == 1
    r51 = schur_index_decision(5, 1)
    assert r51["char_field"]["name"] == "Q(sqrt(5))"
    assert r51["odd"]["schur_index"] == 2
    assert r51["odd"]["realisation_tag"] == {"n": 20, "stabilizer_gens": [1, 9]}
    r32 = schur_index_decision(3, 2)
    assert r32["char_field"]["name"] == "Q"
    assert r32["odd"]["realisation_name"] == "Q(sqrt(-3))"
    assert r32["odd"]["schur_index"] == 2
    r52 = schur_index_decision(5, 2)
    assert r52["odd"]["realisation_name"] == "Q(sqrt(-5))"
    r71 = schur_index_decision(7, 1)
    assert r71["odd"]["schur_index"] == 1


def test_decision_matches_constructive_pipeline():
    # char field tags from decisions equal the computed trace fields, and
    # the realisation tags equal the fixed-point targets
    from weildescent.descent import build_weil, realise_even, realise_odd
    from weildescent.rationality import character_field
    from weildescent.weil import even_odd_split

    for p, f in ((3, 1), (5, 1), (3, 2)):
        dec = schur_index_decision(p, f)
        _, _, rep = build_weil(p, f, 1)
        even, odd = even_odd_split(rep)
        tag = character_field(odd)
        assert tag.to_json() == dec["char_field"]["tag"]
        res_even = realise_even(p, f, 1)
        lifted = tag_lift(res_even.target, field_make(RATIONAL, 4 * p))
        assert lifted.to_json() == dec["even"]["realisation_tag"]
        res_odd, info = realise_odd(p, f, 1)
        if res_odd.rep.field.n == 4 * p:
            assert res_odd.target.to_json() == dec["odd"]["realisation_tag"]
        else:
            lifted = tag_lift(res_odd.target, field_make(RATIONAL, 4 * p))
            assert lifted.to_json() == dec["odd"]["realisation_tag"]
        assert info["schur_index"] == dec["odd"]["schur_index"]


def test_p2_tables_all_five_bullets():
    even_expect = {
        "full": "Q",
        "class3": "Q(sqrt(-2))",
        "class5": "Q(sqrt(-1))",
        "classMinus1": "Q(sqrt(2))",
        "squaresOnly": "Q(zeta_8)",
    }
    odd_expect = {
        "full": (["Q(sqrt(-2))", "Q(sqrt(-1))"], "Q", 2),
        "class3": (["Q(sqrt(-2))"], "Q(sqrt(-2))", 1),
        "class5": (["Q(sqrt(-1))"], "Q(sqrt(-1))", 1),
        "classMinus1": (["Q(zeta_8)"], "Q(sqrt(2))", 2),
        "squaresOnly": (["Q(zeta_8)"], "Q(zeta_8)", 1),
    }
    for A in A_CLASSES:
        table = p2_field_tables(A)
        assert table["even"]["char_field"] == even_expect[A]
        reals, char, idx = odd_expect[A]
        assert table["odd"]["realisations"] == reals
        assert table["odd"]["char_field"] == char
        assert table["odd"]["schur_index"] == idx


def test_p2_tags_consistent_with_names():
    K8 = field_make(RATIONAL, 8)
    table = p2_field_tables("classMinus1")
    assert table["even"]["tag"] == SubfieldTag(K8, [7]).to_json()
    assert describe_subfield(SubfieldTag(K8, [7])) == "Q(sqrt(2))"
    assert describe_subfield(SubfieldTag(K8, [3])) == "Q(sqrt(-2))"
    assert describe_subfield(SubfieldTag(K8, [5])) == "Q(sqrt(-1))"


def test_compute_A_for_Q2():
    assert compute_A_for_Q2() == "squaresOnly"
    assert is_square_in_Z2(17)
    assert not is_square_in_Z2(3)
    assert not is_square_in_Z2(7)  # the class of -1
    # hence both Weil parts for F = Q_2 live over Q(zeta_8)
    table = p2_field_tables(compute_A_for_Q2())
    assert table["even"]["char_field"] == "Q(zeta_8)"
    assert table["odd"]["char_field"] == "Q(zeta_8)"
