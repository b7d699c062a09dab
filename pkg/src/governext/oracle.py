"""Counting Z/pZ-extensions through class field theory, independently of the
governing-matrix route.

Over Q the extensions are Dirichlet characters; over a quadratic field they
are characters of a ray class group, which is built here from generators and
relations and read off through its Smith normal form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import product

from .classgroup import (
    class_group,
    delta_place,
    ideal_in_class_coprime,
    is_principal_with_generator,
    unit_group,
)
from .errors import (
    AvoidanceFailure,
    BadCongruence,
    DeltaZero,
    NonCoprimeModulus,
    NotRationalBase,
    WrongPrimeForReal,
)
from .fields import valuation_and_reduce
from .governing import DEFAULT_NORMALIZATION, governing_matrix
from .linalg import rank_mod_p
from .relations import (
    count_full_support_relations,
    inclusion_exclusion,
    koch_table,
    subset_ranks,
)
from .snf import invariant_factors
from .virtual_units import virtual_unit_basis


# ---------------------------------------------------------------------------
# K = Q: Dirichlet characters
# ---------------------------------------------------------------------------


def _split_rational_set(S, p):
    finite, infinite = [], False
    for v in S:
        if hasattr(v, "kind"):
            if not v.field.is_rational:
                raise NotRationalBase("Dirichlet characters need K = Q")
            if v.is_real:
                infinite = True
                continue
            ell = v.ell
        elif str(v).lower() in ("inf", "oo", "infinity"):
            infinite = True
            continue
        else:
            ell = int(v)
        finite.append(ell)
    if infinite and p != 2:
        raise WrongPrimeForReal("the infinite place only ramifies for p = 2")
    return sorted(finite), infinite


def _character_tuples(finite, p):
    """Exponent choices e_ell in Z/p per component; p must divide ell - 1."""
    ranges = [range(p) if (ell - 1) % p == 0 else range(1) for ell in finite]
    return product(*ranges)


def _odd(finite, e):
    # chi(-1) = (-1)^(sum e_ell (ell - 1)/2), meaningful for p = 2
    return sum(x * ((ell - 1) // 2) for x, ell in zip(e, finite)) % 2 == 1


def dirichlet_character_count(S, p):
    """Number of characters (Z/m)^x -> Z/p ramified exactly at S (K = Q)."""
    finite, infinite = _split_rational_set(S, p)
    for ell in finite:
        if p == 2 and ell == 2:
            raise BadCongruence("2 is wild for p = 2")
        if p != 2 and ell % p != 1:
            raise BadCongruence(f"{ell} is not 1 mod {p}")
    count = 0
    for e in _character_tuples(finite, p):
        if not all(e):
            continue
        if p == 2 and _odd(finite, e) != infinite:
            continue
        count += 1
    return count


def character_group_rank(T, p):
    """dim over F_p of the characters of order p unramified outside T (K = Q)."""
    finite, infinite = _split_rational_set(T, p)
    count = 0
    for e in _character_tuples(finite, p):
        if p == 2 and not infinite and _odd(finite, e):
            continue
        count += 1
    dim = round(math.log(count, p))
    assert p**dim == count
    return dim


# ---------------------------------------------------------------------------
# ray class groups
# ---------------------------------------------------------------------------


class _PresentationData:
    """Local data of units and class-group lifts at a fixed set of places.

    Class-group generators J_i are chosen coprime to every place in ``places``
    so that any sub-modulus can reuse them.
    """

    def __init__(self, F, places, avoid=()):
        self.F = F
        C = class_group(F)
        U = unit_group(F)
        self.class_order = C.h
        self.units = U.generators()
        self.lifts = []  # (d_i, gamma_i) with J_i^{d_i} = (gamma_i)
        avoid = set(avoid) | {v for v in places if v.is_finite}
        for i, d in enumerate(C.invariants):
            coords = [0] * len(C.invariants)
            coords[i] = 1
            J = ideal_in_class_coprime(C, coords, avoid)
            if J is None:
                raise AvoidanceFailure("no class-group generator coprime to the modulus")
            gamma = is_principal_with_generator(F, J**d)
            self.lifts.append((d, gamma))
        self.local = {}
        for v in places:
            self.local[v] = self._local_data(v)

    def _local_data(self, v):
        elems = list(self.units) + [g for _, g in self.lifts]
        if v.is_real:
            return 2, tuple(0 if x.sign(v.index) > 0 else 1 for x in elems)
        rf = v.residue_field
        logs = []
        for x in elems:
            m, u = valuation_and_reduce(v, x)
            if m:
                raise NonCoprimeModulus(f"{x} is not a unit at {v}")
            logs.append(rf.dlog(u))
        return rf.q - 1, tuple(logs)

    def relations(self, places):
        """Relation rows over columns [places..., J_1..J_k]."""
        places = list(places)
        n_loc = len(places)
        k = len(self.lifts)
        ncols = n_loc + k
        rows = []
        for j, v in enumerate(places):
            order = self.local[v][0]
            row = [0] * ncols
            row[j] = order
            rows.append(row)
        n_units = len(self.units)
        for t in range(n_units):
            rows.append([self.local[v][1][t] for v in places] + [0] * k)
        for i, (d, _) in enumerate(self.lifts):
            row = [-self.local[v][1][n_units + i] for v in places] + [0] * k
            row[n_loc + i] = d
            rows.append(row)
        return rows, ncols


@dataclass(frozen=True)
class RayClassGroup:
    field: object
    modulus: tuple
    ram_reals: tuple
    relations: tuple
    ncols: int
    class_number: int
    _inv: list = dc_field(default_factory=list, compare=False, repr=False)

    @property
    def invariants(self):
        if not self._inv:
            self._inv.append(tuple(invariant_factors([list(r) for r in self.relations], self.ncols)))
        return self._inv[0]

    @property
    def order(self):
        return math.prod(self.invariants)

    def p_rank(self, p):
        return self.ncols - rank_mod_p([list(r) for r in self.relations], p, self.ncols)

    def unit_quotient_order(self):
        """|(O/m)^x x signs / image of units|."""
        n_loc = len(self.modulus) + len(self.ram_reals)
        k = self.ncols - n_loc
        n_rows = n_loc + len(unit_group(self.field).generators())
        rows = [list(r[:n_loc]) for r in self.relations[:n_rows]]
        if n_loc == 0:
            return 1
        return math.prod(invariant_factors(rows, n_loc))


def ray_class_group(F, m, ram_reals=(), data=None):
    """Ray class group for the modulus m * (product of ram_reals)."""
    m = tuple(m)
    ram_reals = tuple(ram_reals)
    if len(set(m)) != len(m):
        raise NonCoprimeModulus("modulus places must be distinct")
    if any(not v.is_finite for v in m) or any(not v.is_real for v in ram_reals):
        raise ValueError("finite and real parts of the modulus are mixed up")
    places = m + ram_reals
    if data is None:
        data = _PresentationData(F, places)
    rows, ncols = data.relations(places)
    return RayClassGroup(F, m, ram_reals, tuple(tuple(r) for r in rows), ncols, data.class_order)


def oracle_h1_dim(F, p, T, data=None):
    """dim H^1(G_T, Z/p) as the p-rank of the ray class group of modulus T."""
    T = tuple(T)
    if F.is_rational:
        return character_group_rank(T, p)
    finite = tuple(v for v in T if v.is_finite)
    reals = tuple(v for v in T if v.is_real)
    if reals and p != 2:
        raise WrongPrimeForReal("real places only ramify for p = 2")
    return ray_class_group(F, finite, reals, data).p_rank(p)


# ---------------------------------------------------------------------------
# both counts side by side
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    field: object
    p: int
    places: tuple
    relation_count: int
    cohomology_count_engine: int
    cohomology_count_oracle: int
    relation_dims: tuple  # dim R_T per subset mask
    engine_dims: tuple  # dim H^1(G_T) from the Koch formula
    oracle_dims: tuple  # dim H^1(G_T) from ray class groups
    verdict: bool

    @property
    def proposition_holds(self):
        """dim R_X == dim H^1(G_X) - dim H^1(G_empty) for every subset (oracle side)."""
        h0 = self.oracle_dims[0]
        return all(r == o - h0 for r, o in zip(self.relation_dims, self.oracle_dims))

    def to_json(self):
        tok = [v.token for v in self.places]
        return {
            "field": self.field.to_json(),
            "p": self.p,
            "places": tok,
            "counts": {
                "relations": self.relation_count,
                "cohomology": self.cohomology_count_engine,
                "oracle": self.cohomology_count_oracle,
            },
            "subsets": [
                {
                    "T": [tok[i] for i in range(len(tok)) if mask >> i & 1],
                    "dim_R": self.relation_dims[mask],
                    "dim_engine": self.engine_dims[mask],
                    "dim_oracle": self.oracle_dims[mask],
                }
                for mask in range(len(self.engine_dims))
            ],
            "verdict": "pass" if self.verdict else "fail",
        }


def verify_theorem_main(F, p, S, basis=None, norm=DEFAULT_NORMALIZATION, data=None):
    """Compare both sides of the cardinality equality on S, with an independent oracle."""
    S = tuple(S)
    for v in S:
        if v.is_finite and delta_place(v, p) == 0:
            raise DeltaZero(f"N({v}) = {v.norm} is not 1 mod {p}")
        if v.is_real and p != 2:
            raise WrongPrimeForReal("real places require p = 2")
    B = basis if basis is not None else virtual_unit_basis(F, p, S)
    G = governing_matrix(S, B, norm)
    n = len(S)
    relation_count = count_full_support_relations(G)
    ranks = subset_ranks(list(G.columns), p)
    relation_dims = tuple(bin(m).count("1") - ranks[m] for m in range(1 << n))
    columns = dict(zip(S, G.columns))
    table = koch_table(S, B, columns)
    engine_dims = tuple(r.dim_h1 for r in table)
    engine_count = inclusion_exclusion(n, p, lambda m: engine_dims[m] - engine_dims[0])
    subsets = [tuple(S[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    if F.is_rational:
        oracle_dims = tuple(character_group_rank(T, p) for T in subsets)
        oracle_count = dirichlet_character_count(S, p)
    else:
        if data is None:
            data = _PresentationData(F, S)
        oracle_dims = tuple(oracle_h1_dim(F, p, T, data) for T in subsets)
        oracle_count = inclusion_exclusion(n, p, lambda m: oracle_dims[m] - oracle_dims[0])
    verdict = (
        relation_count == engine_count == oracle_count and engine_dims == oracle_dims
    )
    return VerificationReport(
        F, p, S, relation_count, engine_count, oracle_count,
        relation_dims, engine_dims, oracle_dims, verdict,
    )
