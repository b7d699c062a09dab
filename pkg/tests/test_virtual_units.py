import pytest

from governext.classgroup import class_group
from governext.corpus import tame_places
from governext.errors import DimensionMismatch
from governext.fields import RATIONALS, factor_rational_prime, make_field, parse_place, principal_ideal
from governext.governing import frobenius_vector
from governext.linalg import column_rank
from governext.virtual_units import (
    VirtualUnitBasis,
    basis_from_json,
    exact_sequence_report,
    expected_dimension,
    virtual_unit_basis,
)

CASES = [(None, 2), (None, 3), (-1, 2), (-3, 3), (-23, 3), (-23, 2), (-161, 2), (-14, 2), (79, 3),
         (226, 2), (10, 2), (10, 3), (-47, 5), (5, 5), (-3, 2), (82, 2), (-21, 2)]


def field(d):
    return RATIONALS if d is None else make_field(d)


@pytest.mark.parametrize("d, p", CASES)
def test_basis_dimension(d, p):
    B = virtual_unit_basis(field(d), p)
    rep = exact_sequence_report(B)
    assert rep["d"] == B.d == expected_dimension(B.field, p)
    assert rep["class_lifts"] == class_group(B.field).p_rank(p)


@pytest.mark.parametrize("d, p", CASES)
def test_witness_pth_power(d, p):
    B = virtual_unit_basis(field(d), p)
    for e in B.entries:
        assert principal_ideal(e.value) == e.witness**p


@pytest.mark.parametrize("d, p", CASES)
def test_basis_independent_modulo_pth_powers(d, p):
    """Frobenius vectors at many auxiliary places span F_p^d."""
    F = field(d)
    places = tame_places(F, p, 1500)
    B = virtual_unit_basis(F, p, places)
    cols = [frobenius_vector(v, B).raw for v in places]
    assert column_rank(cols, p) == B.d


@pytest.mark.parametrize("d, p", [(-23, 3), (-161, 2), (79, 3), (226, 2)])
def test_avoidance(d, p):
    F = field(d)
    C = class_group(F)
    # avoid the primes the default choice would use
    default = virtual_unit_basis(F, p)
    avoid = [v for e in default.entries if e.source == "class-lift"
             for ell in [e.witness.norm] for v in factor_rational_prime(F, ell)]
    B = virtual_unit_basis(F, p, avoid)
    assert B.covers(avoid)
    for e in B.entries:
        for v in avoid:
            assert v.valuation(e.value) == 0
    assert B.d == default.d and C.p_rank(p) > 0


def test_example_minus_23():
    B = virtual_unit_basis(make_field(-23), 3)
    assert B.d == 1
    assert str(B.values[0]) == "(3+sqrt(-23))/2"
    assert B.entries[0].source == "class-lift"


@pytest.mark.parametrize("d, p", CASES)
def test_json_round_trip(d, p):
    F = field(d)
    places = tame_places(F, p, 100)[:3]
    B = virtual_unit_basis(F, p, places)
    B2 = basis_from_json(F, p, B.to_json(), parse_place)
    assert B2.values == B.values and B2.covers(places)


def test_dimension_mismatch_detected():
    B = virtual_unit_basis(make_field(-23), 3)
    broken = VirtualUnitBasis(B.field, 3, (), ())
    with pytest.raises(DimensionMismatch):
        exact_sequence_report(broken)
