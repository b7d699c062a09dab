"""Bases of V_empty / K^{x p}: elements whose principal ideal is a p-th power.

The basis is the image of a basis of the units mod p-th powers followed by one
lift per generator of Cl[p]: if J^p = (x) then x is a virtual unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from sympy import factorint

from .classgroup import (
    class_group,
    delta_field,
    ideal_in_class_coprime,
    is_principal_with_generator,
    unit_group,
)
from .errors import AvoidanceFailure, DimensionMismatch
from .fields import Field, FieldElement, Ideal, element_from_json, ideal_from_json, unit_ideal


@dataclass(frozen=True)
class VirtualUnit:
    value: FieldElement
    source: str  # "torsion" | "fundamental-unit" | "class-lift"
    witness: Ideal  # (value) == witness ** p
    avoid: tuple

    def to_json(self):
        return {
            "value": self.value.to_json(),
            "display": str(self.value),
            "source": self.source,
            "witness": self.witness.to_json(),
        }


@dataclass(frozen=True)
class VirtualUnitBasis:
    field: Field
    p: int
    entries: tuple
    avoid: tuple  # places the entries are coprime to

    @property
    def d(self):
        return len(self.entries)

    @property
    def values(self):
        return [e.value for e in self.entries]

    @cached_property
    def _avoid_set(self):
        return frozenset(self.avoid)

    def covers(self, places):
        """True when every finite place of ``places`` is in the avoidance set."""
        return all(v in self._avoid_set for v in places if v.is_finite)

    def to_json(self):
        return {
            "d": self.d,
            "entries": [e.to_json() for e in self.entries],
            "avoid": [v.token for v in self.avoid],
        }


def _strip_pth_powers(x, p):
    """Divide x by the largest m^p (m a positive integer) dividing its numerator."""
    g = gcd(x.a, x.b)
    if g <= 1:
        return x
    m = 1
    for q, e in factorint(g).items():
        m *= q ** (e // p)
    if m == 1:
        return x
    return x.field.element(x.a // m**p, x.b // m**p, x.den)


def virtual_unit_basis(F, p, avoid=()):
    """Basis of V_empty / K^{x p} with every entry coprime to ``avoid``."""
    avoid = tuple(sorted({v for v in avoid if v.is_finite}, key=lambda v: v.sort_key()))
    U = unit_group(F)
    one = unit_ideal(F)
    entries = []
    if U.w % p == 0:
        entries.append(VirtualUnit(U.torsion_generator, "torsion", one, avoid))
    if U.fundamental_unit is not None:
        entries.append(VirtualUnit(U.fundamental_unit, "fundamental-unit", one, avoid))
    C = class_group(F)
    for i, d in enumerate(C.invariants):
        if d % p:
            continue
        coords = [0] * len(C.invariants)
        coords[i] = d // p
        J = ideal_in_class_coprime(C, coords, avoid)
        if J is None:
            raise AvoidanceFailure(f"no ideal in class {coords} coprime to {avoid}")
        gamma = is_principal_with_generator(F, J**p)
        if gamma is None:
            raise DimensionMismatch(f"{J}^{p} is not principal")
        gamma = _strip_pth_powers(gamma, p)
        entries.append(VirtualUnit(gamma, "class-lift", J, avoid))
    return VirtualUnitBasis(F, p, tuple(entries), avoid)


def expected_dimension(F, p):
    """r1 + r2 - 1 + delta(K) + dim Cl[p]."""
    return F.r1 + F.r2 - 1 + delta_field(F, p) + class_group(F).p_rank(p)


def exact_sequence_report(B):
    """Dimensions of the unit part, the class part and the total."""
    units = sum(1 for e in B.entries if e.source != "class-lift")
    lifts = B.d - units
    expected = expected_dimension(B.field, B.p)
    if B.d != expected:
        raise DimensionMismatch(
            f"basis has dimension {B.d}, Dirichlet count gives {expected}"
        )
    return {"units": units, "class_lifts": lifts, "d": B.d, "expected": expected}


def basis_from_json(F, p, data, place_parser):
    avoid = tuple(place_parser(F, t) for t in data["avoid"])
    entries = tuple(
        VirtualUnit(
            element_from_json(F, e["value"]),
            e["source"],
            ideal_from_json(F, e["witness"]),
            avoid,
        )
        for e in data["entries"]
    )
    return VirtualUnitBasis(F, p, entries, avoid)
