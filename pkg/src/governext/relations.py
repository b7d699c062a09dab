"""Dependence relations on Frobenius vectors and the dimension counts around them.

Everything here is linear algebra over F_p on a governing matrix, plus the
inclusion-exclusion over subsets of S that turns dimensions into exact-support
counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classgroup import delta_field, delta_place
from .errors import DeltaZero, LedgerMismatch, SetTooLarge, WildPlace, WrongPrimeForReal
from .fields import factor_rational_prime, real_places
from .linalg import column_rank, rank_and_kernel, row_echelon

MAX_SET_SIZE = 16

__all__ = [
    "RelationSpace",
    "KochReport",
    "LedgerReport",
    "rank_and_kernel",
    "relation_space",
    "subset_ranks",
    "count_full_support_relations",
    "koch_dimension",
    "koch_table",
    "count_exact_ramified_classes",
    "inclusion_exclusion",
    "wiles_greenberg_ledger",
]


@dataclass(frozen=True)
class RelationSpace:
    places: tuple
    p: int
    independent: tuple  # indices I into places
    dependent: tuple  # indices D into places
    coefficients: tuple  # F[j][i]: sigma_{w_j} = sum_i F[j][i] sigma_{u_i}
    basis: tuple  # R_j as vectors in F_p^|S|

    @property
    def r(self):
        return len(self.independent)

    @property
    def s(self):
        return len(self.dependent)

    def to_json(self):
        tok = [v.token for v in self.places]
        return {
            "r": self.r,
            "s": self.s,
            "I": [tok[i] for i in self.independent],
            "D": [tok[j] for j in self.dependent],
            "basis": [list(R) for R in self.basis],
        }


def relation_space(G):
    """Split S into independent and dependent places and build the relation basis."""
    p = G.p
    n = len(G.places)
    R, pivots = row_echelon(G.rows, p, n)
    pivset = set(pivots)
    dependent = tuple(j for j in range(n) if j not in pivset)
    coeffs = []
    basis = []
    for j in dependent:
        # reduced echelon: column j = sum over pivot rows of R[row][j] * pivot column
        Fj = tuple(R[row][j] % p for row in range(len(pivots)))
        coeffs.append(Fj)
        vec = [0] * n
        vec[j] = 1
        for row, i in enumerate(pivots):
            vec[i] = -Fj[row] % p
        basis.append(tuple(vec))
    for vec in basis:
        for row in G.rows:
            if sum(x * y for x, y in zip(row, vec)) % p:
                raise ArithmeticError("relation does not annihilate the governing matrix")
    return RelationSpace(G.places, p, tuple(pivots), dependent, tuple(coeffs), tuple(basis))


def _check_size(n):
    if n > MAX_SET_SIZE:
        raise SetTooLarge(f"|S| = {n} exceeds the cap of {MAX_SET_SIZE}")


def subset_ranks(columns, p):
    """Rank of every column subset, indexed by bitmask."""
    n = len(columns)
    _check_size(n)
    ranks = [0] * (1 << n)
    for mask in range(1, 1 << n):
        ranks[mask] = column_rank([columns[i] for i in range(n) if mask >> i & 1], p)
    return ranks


def inclusion_exclusion(n, p, dim_of_mask):
    """sum over T subset of S of (-1)^{|S minus T|} p^{dim(T)}."""
    total = 0
    for mask in range(1 << n):
        sign = -1 if (n - bin(mask).count("1")) % 2 else 1
        total += sign * p ** dim_of_mask(mask)
    return total


def count_full_support_relations(G):
    """Number of relations sum a_v sigma_v = 0 with every a_v nonzero."""
    n = len(G.places)
    ranks = subset_ranks(list(G.columns), G.p)
    return inclusion_exclusion(n, G.p, lambda m: bin(m).count("1") - ranks[m])


@dataclass(frozen=True)
class KochReport:
    places: tuple
    dim_V: int
    delta_sum: int
    dim_h1: int
    dim_h1_empty: int

    def to_json(self):
        return {
            "T": [v.token for v in self.places],
            "dim_V": self.dim_V,
            "delta_sum": self.delta_sum,
            "dim": self.dim_h1,
        }


def _koch_terms(Z, p):
    delta_sum = 0
    active = []
    for v in Z:
        if v.is_real:
            if p != 2:
                raise WrongPrimeForReal(f"real place {v} requires p = 2")
        elif v.ell == p:
            raise WildPlace(f"{v} lies above p = {p}")
        dv = delta_place(v, p)
        delta_sum += dv
        if dv:
            active.append(v)
    return delta_sum, active


def koch_dimension(Z, B, columns):
    """dim H^1(G_Z, Z/p) from the Shafarevich-Koch formula.

    ``columns`` maps each place with delta(K_v) = 1 to its Frobenius vector.
    """
    F, p = B.field, B.p
    Z = tuple(Z)
    delta_sum, active = _koch_terms(Z, p)
    dim_V = B.d - column_rank([columns[v] for v in active], p)
    base = -F.r1 - F.r2 + 1 - delta_field(F, p)
    dim_h1 = base + dim_V + delta_sum
    dim_h1_empty = base + B.d
    return KochReport(Z, dim_V, delta_sum, dim_h1, dim_h1_empty)


def koch_table(S, B, columns):
    """KochReport for every subset of S, indexed by bitmask."""
    S = tuple(S)
    _check_size(len(S))
    return [
        koch_dimension([S[i] for i in range(len(S)) if mask >> i & 1], B, columns)
        for mask in range(1 << len(S))
    ]


def count_exact_ramified_classes(S, B, columns):
    """Number of classes in H^1(G_S)/H^1(G_empty) whose extension ramifies at all of S."""
    S = tuple(S)
    for v in S:
        if v.is_finite and v.ell != B.p and delta_place(v, B.p) == 0:
            raise DeltaZero(f"N({v}) is not 1 mod {B.p}")
    table = koch_table(S, B, columns)
    h0 = table[0].dim_h1
    return inclusion_exclusion(len(S), B.p, lambda m: table[m].dim_h1 - h0)


@dataclass(frozen=True)
class LedgerReport:
    X: tuple
    X_finite: tuple
    X_real: tuple
    Z: tuple
    rows: tuple  # (place token, row label, dim N_v - dim M_v)
    dim_M_perp: int
    dim_N_perp: int
    value: int
    s: int

    def to_json(self):
        return {
            "X": [v.token for v in self.X],
            "Z": [v.token for v in self.Z],
            "rows": [list(r) for r in self.rows],
            "mM": self.dim_M_perp,
            "mN": self.dim_N_perp,
            "value": self.value,
            "s": self.s,
        }


def wiles_greenberg_ledger(X, B, G):
    """Dimension bookkeeping of the dual Selmer comparison; must equal dim R_X."""
    F, p = B.field, B.p
    X = tuple(X)
    X_fin = tuple(v for v in X if v.is_finite)
    X_inf = tuple(v for v in X if v.is_real)
    if X_inf and p != 2:
        raise WrongPrimeForReal("real places in X require p = 2")
    Z_p = tuple(factor_rational_prime(F, p))
    Z_inf = tuple(real_places(F))
    Z = Z_p + X_fin + Z_inf
    rows = []
    for v in Z_p:
        rows.append((v.token, "above p", 0))
    for v in Z_inf:
        if v in X_inf:
            rows.append((v.token, "X_inf", 1))
        else:
            rows.append((v.token, "Z_inf - X_inf", 0))
    for v in X_fin:
        if v.ell == p:
            raise WildPlace(f"{v} lies above p = {p}")
        if delta_place(v, p) == 0:
            raise DeltaZero(f"N({v}) is not 1 mod {p}")
        rows.append((v.token, "X_finite", 1))
    local_sum = sum(r[2] for r in rows)
    if local_sum != len(X):
        raise LedgerMismatch(f"local terms sum to {local_sum}, expected |X| = {len(X)}")
    idx = [G.places.index(v) for v in X]
    r = column_rank([G.columns[i] for i in idx], p)
    dim_M_perp = B.d
    dim_N_perp = B.d - r
    value = dim_N_perp - dim_M_perp + local_sum
    s = relation_space(G.submatrix(idx)).s
    if value != s:
        raise LedgerMismatch(f"ledger value {value} differs from dim R_X = {s}")
    return LedgerReport(X, X_fin, X_inf, Z, tuple(rows), dim_M_perp, dim_N_perp, value, s)
