import pytest

from governext.classgroup import class_group
from governext.corpus import sample_sets
from governext.errors import BadCongruence, NotRationalBase, WrongPrimeForReal
from governext.fields import RATIONALS, make_field, parse_places, real_places
from governext.oracle import (
    _PresentationData,
    character_group_rank,
    dirichlet_character_count,
    oracle_h1_dim,
    ray_class_group,
    verify_theorem_main,
)


def test_gaussian_mod_five_is_trivial():
    F = make_field(-1)
    (v,) = parse_places(F, "5.1")
    G = ray_class_group(F, [v])
    assert G.order == 1 and G.invariants == ()


def test_minus_23_class_group():
    F = make_field(-23)
    G = ray_class_group(F, [])
    assert G.invariants == (3,)
    assert G.p_rank(3) == 1 and G.p_rank(2) == 0


def test_sqrt2_both_infinite_places():
    F = make_field(2)
    G = ray_class_group(F, [], real_places(F))
    assert G.order == 1


def test_sqrt3_narrow_class_group():
    # the fundamental unit 2 + sqrt 3 is totally positive, so the narrow class number is 2
    F = make_field(3)
    assert ray_class_group(F, [], real_places(F)).order == 2


@pytest.mark.parametrize("d", [-23, -161, 79, 10, -1, -3, 226, -47])
def test_order_is_h_times_unit_quotient(d):
    """|Cl_m| = h * |(O/m)^x x signs / image of units|."""
    F = make_field(d)
    sets = sample_sets(F, 2, 10, 3, 200, seed=7)
    for S in sets:
        fin = [v for v in S if v.is_finite]
        reals = [v for v in S if v.is_real]
        G = ray_class_group(F, fin, reals)
        assert G.order == class_group(F).h * G.unit_quotient_order()


@pytest.mark.parametrize(
    "tokens, p, count",
    [("3,7", 2, 1), ("7,13", 3, 4), ("3,5", 2, 0), ("3,5,inf", 2, 1), ("7", 3, 2), ("5", 2, 1), ("3", 2, 0)],
)
def test_dirichlet_counts(tokens, p, count):
    S = parse_places(RATIONALS, tokens)
    assert dirichlet_character_count(S, p) == count


def test_character_rank():
    assert character_group_rank(parse_places(RATIONALS, "7,13"), 3) == 2
    assert character_group_rank(parse_places(RATIONALS, "3,7"), 2) == 1
    assert character_group_rank(parse_places(RATIONALS, "3,7,inf"), 2) == 2
    assert character_group_rank((), 5) == 0


def test_dirichlet_errors():
    with pytest.raises(BadCongruence):
        dirichlet_character_count(parse_places(RATIONALS, "7"), 5)
    with pytest.raises(WrongPrimeForReal):
        dirichlet_character_count(parse_places(RATIONALS, "7,inf"), 3)
    with pytest.raises(NotRationalBase):
        dirichlet_character_count(parse_places(make_field(-1), "5.1"), 2)


@pytest.mark.parametrize(
    "d, p, tokens",
    [(None, 2, "3,7"), (-1, 2, "5.1"), (-23, 3, "151.1"), (-23, 3, "13.1,13.2"), (5, 2, "inf.1,11.1"),
     (-161, 2, "3.1,5.2"), (79, 3, "19,7.1,13.2"), (-3, 3, "7.1,7.2,13.1")],
)
def test_verify_examples(d, p, tokens):
    F = RATIONALS if d is None else make_field(d)
    S = parse_places(F, tokens)
    rep = verify_theorem_main(F, p, S)
    assert rep.verdict and rep.proposition_holds
    js = rep.to_json()
    assert js["verdict"] == "pass" and len(js["subsets"]) == 2 ** len(S)


def test_presentation_reuse_matches_fresh():
    F = make_field(-161)
    sets = sample_sets(F, 2, 20, 3, 300, seed=3)
    union = sorted({v for S in sets for v in S}, key=lambda v: v.sort_key())
    data = _PresentationData(F, union)
    for S in sets:
        assert oracle_h1_dim(F, 2, S, data) == oracle_h1_dim(F, 2, S)
