"""Frobenius vectors in the governing extension, as power residue symbols.

Frobenius at a place v of K(mu_p) above v acts on the p-th root of a virtual
unit x by the root of unity ``u^((q-1)/p)``, u the residue of the unit part of
x.  When q = N(v) = 1 mod p the residue field does not grow in K(mu_p)/K, so
everything happens in the residue field of K and the extensions themselves
are never built.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classgroup import delta_place
from .errors import (
    BasisNotCoprime,
    DeltaZero,
    DuplicatePlace,
    NonUnitValuation,
    WrongPrimeForReal,
)
from .fields import valuation_and_reduce


@dataclass(frozen=True)
class SymbolNormalization:
    """Which primitive p-th root of unity each residue field uses.

    ``generator_index`` picks the k-th multiplicative generator g of the
    residue field in its canonical enumeration; zeta_v = g^((q-1)/p).
    """

    generator_index: int = 0

    def zeta(self, v, p):
        rf = v.residue_field
        g = rf.nth_generator(self.generator_index)
        return rf.pow(g, (rf.q - 1) // p)


DEFAULT_NORMALIZATION = SymbolNormalization()


def power_residue_symbol(v, alpha, p, norm=DEFAULT_NORMALIZATION):
    """Exponent e in F_p with Frob_v(alpha^(1/p)) = zeta_v^e * alpha^(1/p)."""
    if v.is_real:
        if p != 2:
            raise WrongPrimeForReal(f"real place {v} only carries a symbol for p = 2")
        return 0 if alpha.sign(v.index) > 0 else 1
    if delta_place(v, p) == 0:
        raise DeltaZero(f"N({v}) = {v.norm} is not 1 mod {p}")
    m, u = valuation_and_reduce(v, alpha)
    if m % p:
        raise NonUnitValuation(f"v_{v}({alpha}) = {m} is not divisible by {p}")
    rf = v.residue_field
    t = rf.pow(u, (rf.q - 1) // p)
    zeta = norm.zeta(v, p)
    cur = rf.one()
    for e in range(p):
        if cur == t:
            return e
        cur = rf.mul(cur, zeta)
    raise ArithmeticError(f"{t} is not a p-th root of unity in F_{rf.q}")


def is_local_pth_power(v, alpha, p):
    """Direct test: is alpha a p-th power in the completion at v (tame, unit part)?"""
    if v.is_real:
        return p != 2 or alpha.sign(v.index) > 0
    m, u = valuation_and_reduce(v, alpha)
    if m % p:
        return False
    rf = v.residue_field
    # exhaustive search over the residue field
    if rf.degree == 1:
        return any(pow(y, p, rf.ell) == u for y in range(1, rf.ell))
    ell = rf.ell
    return any(
        rf.pow((x, y), p) == u for x in range(ell) for y in range(ell) if (x, y) != (0, 0)
    )


@dataclass(frozen=True)
class FrobeniusVector:
    place: object
    raw: tuple
    p: int

    @property
    def normalized(self):
        for x in self.raw:
            if x:
                inv = pow(x, -1, self.p)
                return tuple(y * inv % self.p for y in self.raw)
        return self.raw

    def is_zero(self):
        return not any(self.raw)


def frobenius_vector(v, B, norm=DEFAULT_NORMALIZATION):
    p = B.p
    raw = tuple(power_residue_symbol(v, x, p, norm) for x in B.values)
    if v.is_finite and delta_place(v, p) == 0:
        raise DeltaZero(f"N({v}) is not 1 mod {p}")
    return FrobeniusVector(v, raw, p)


@dataclass(frozen=True)
class GoverningMatrix:
    places: tuple
    p: int
    d: int
    columns: tuple  # one raw Frobenius vector per place

    @property
    def rows(self):
        return [[col[i] for col in self.columns] for i in range(self.d)]

    def submatrix(self, indices):
        return GoverningMatrix(
            tuple(self.places[i] for i in indices),
            self.p,
            self.d,
            tuple(self.columns[i] for i in indices),
        )

    def to_json(self):
        return {
            "places": [v.token for v in self.places],
            "p": self.p,
            "d": self.d,
            "columns": [list(c) for c in self.columns],
        }

    @classmethod
    def from_json(cls, data, F=None, parse=None):
        places = tuple(parse(F, t) for t in data["places"]) if parse else tuple(data["places"])
        return cls(places, int(data["p"]), int(data["d"]), tuple(tuple(c) for c in data["columns"]))


def governing_matrix(S, B, norm=DEFAULT_NORMALIZATION):
    """The d x |S| matrix of Frobenius vectors, columns in the order of S."""
    S = tuple(S)
    if len(set(S)) != len(S):
        raise DuplicatePlace("places of S must be distinct")
    for v in S:
        if v.is_finite and delta_place(v, B.p) == 0:
            raise DeltaZero(f"N({v}) = {v.norm} is not 1 mod {B.p}")
        if v.is_real and B.p != 2:
            raise WrongPrimeForReal(f"real place {v} requires p = 2")
    if not B.covers(S):
        raise BasisNotCoprime("virtual-unit basis was not built to avoid every place of S")
    cols = tuple(frobenius_vector(v, B, norm).raw for v in S)
    return GoverningMatrix(S, B.p, B.d, cols)
