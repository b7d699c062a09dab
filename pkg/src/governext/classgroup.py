"""Class groups, units and principality testing for Q and quadratic fields.

Ideal classes are handled through reduced ideals ``[a, (-b + sqrt D)/2]``
(the lattice picture of binary quadratic forms of discriminant D).  Every
reduction step is tracked as an explicit field element, so a principal ideal
comes back with a generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import primerange

from .errors import DiscriminantTooLarge, WildPlace
from .fields import (
    Field,
    FieldElement,
    Ideal,
    factor_rational_prime,
    ideal_product_norm,
    principal_ideal,
    unit_ideal,
)
from .snf import hnf_add_relation, lattice_rows, smith_normal_form

MAX_ABS_DISC = 10**4


# ---------------------------------------------------------------------------
# reduced ideals
# ---------------------------------------------------------------------------


def _ideal_to_ab(A):
    """Primitive ideal -> (a, b) with A = [a, (-b + sqrt D)/2]."""
    assert A.c == 1
    B = A.b
    b = -(2 * B + 1) if A.field.half_integral else -2 * B
    return A.a, b


def _ab_to_ideal(F, a, b):
    B = (-b - 1) // 2 if F.half_integral else -b // 2
    return Ideal(F, a, B % a, 1)


def _is_reduced_real(D, a, b):
    # 0 < b < sqrt D and sqrt D - b < 2a < sqrt D + b
    if b <= 0 or b * b >= D:
        return False
    if (2 * a + b) ** 2 <= D:
        return False
    t = 2 * a - b
    return t <= 0 or t * t < D


def _normalize_b(D, a, b, real):
    """Pick the representative of b mod 2a used by the reduction step."""
    two_a = 2 * a
    if real:
        s = isqrt(D)
        if a <= s:
            # largest b' = b mod 2a with b' <= s, i.e. sqrt D - 2a < b' < sqrt D
            return s - ((s - b) % two_a)
    r = b % two_a
    return r - two_a if r > a else r


class _Reducer:
    """Tracked reduction for one field."""

    def __init__(self, F):
        self.F = F
        self.D = F.disc
        self.real = F.d > 0
        self.sqrtD = F.sqrt_disc

    def rho(self, a, b, track):
        """One reduction step.  Returns (a', b', lam) with A = lam * A'."""
        D = self.D
        c = (b * b - D) // (4 * a)
        a2 = abs(c)
        b2 = _normalize_b(D, a2, -b, self.real)
        lam = None
        if track:
            F = self.F
            theta_bar = (F.element(-b) - self.sqrtD) * Fraction(1, 2)
            lam = F.element(a) / theta_bar
        return a2, b2, lam

    def reduce(self, A, track=True):
        """Reduce a primitive ideal.  Returns (a, b, Lambda) with A = Lambda * [a, b]."""
        F = self.F
        D = self.D
        a, b = _ideal_to_ab(A)
        b = _normalize_b(D, a, b, self.real)
        lam = F.one() if track else None
        for _ in range(100000):
            if self.real:
                if _is_reduced_real(D, a, b):
                    return a, b, lam
            else:
                c = (b * b - D) // (4 * a)
                if a < c or (a == c and b >= 0):
                    return a, b, lam
            a, b, step = self.rho(a, b, track)
            if track:
                lam = lam * step
        raise RuntimeError("ideal reduction did not terminate")

    def cycle(self, a, b, track=True):
        """Reduced ideals in the rho-cycle of a reduced real ideal.

        Yields (a_k, b_k, Lambda_k) with start = Lambda_k * ideal_k.
        """
        F = self.F
        lam = F.one() if track else None
        start = (a, b)
        while True:
            yield a, b, lam
            a, b, step = self.rho(a, b, track)
            if track:
                lam = lam * step
            if (a, b) == start:
                return

    def key(self, A):
        """Canonical label of the ideal class of a nonzero integral ideal."""
        if A.c != 1:
            A = Ideal(self.F, A.a // A.c, A.b // A.c, 1)
        a, b, _ = self.reduce(A, track=False)
        if not self.real:
            return (a, b)
        return min((x, y) for x, y, _ in self.cycle(a, b, track=False))

    def generator(self, A):
        """A generator of A, or None when A is not principal."""
        F = self.F
        g = A.c
        A0 = Ideal(F, A.a // g, A.b // g, 1)
        a, b, lam = self.reduce(A0)
        if not self.real:
            return lam * g if a == 1 else None
        for x, _, lam2 in self.cycle(a, b):
            if x == 1:
                return lam * lam2 * g
        return None

    def reduced_ideal(self, key):
        return _ab_to_ideal(self.F, *key)


@lru_cache(maxsize=None)
def _reducer(F):
    return _Reducer(F)


def is_principal_with_generator(F, A):
    """A generator of the ideal A, or None (not principal)."""
    if A.field != F:
        raise ValueError("ideal of a different field")
    if F.is_rational:
        return F.element(A.a)
    gamma = _reducer(F).generator(A)
    if gamma is None:
        return None
    # prefer a small, positive-looking representative
    if gamma.a < 0 or (gamma.a == 0 and gamma.b < 0):
        gamma = -gamma
    return gamma


# ---------------------------------------------------------------------------
# class group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassGroupData:
    field: Field
    invariants: tuple  # d_1 | d_2 | ... (all > 1)
    generators: tuple  # one Ideal per invariant factor
    h: int
    _logs: dict = dc_field(default_factory=dict, compare=False, repr=False)
    _reps: dict = dc_field(default_factory=dict, compare=False, repr=False)

    def key(self, A):
        if self.field.is_rational:
            return ()
        return _reducer(self.field).key(A)

    def log(self, A):
        """Coordinates of the class of A with respect to ``generators``."""
        if self.field.is_rational:
            return ()
        return self._logs[self.key(A)]

    def representative(self, coords):
        """A reduced ideal in the class with the given coordinates."""
        coords = tuple(c % d for c, d in zip(coords, self.invariants))
        return self._reps[coords]

    def p_rank(self, p):
        return sum(1 for d in self.invariants if d % p == 0)

    def to_json(self):
        return {
            "invariants": list(self.invariants),
            "h": self.h,
            "generators": [g.to_json() for g in self.generators],
        }


def minkowski_bound(F):
    D = abs(F.disc)
    if F.d < 0:
        return 2 / math.pi * math.sqrt(D)
    return math.sqrt(D) / 2


@lru_cache(maxsize=None)
def class_group(F, max_abs_disc=MAX_ABS_DISC):
    """Class group of F, by enumeration of reduced ideal classes."""
    if F.is_rational:
        return ClassGroupData(F, (), (), 1)
    if abs(F.disc) > max_abs_disc:
        raise DiscriminantTooLarge(f"|disc| = {abs(F.disc)} exceeds {max_abs_disc}")
    red = _reducer(F)
    bound = int(minkowski_bound(F))
    gens = []
    seen = set()
    for ell in primerange(2, bound + 1):
        for v in factor_rational_prime(F, ell):
            if v.norm > bound or v.splitting == "inert":
                continue
            P = v.prime_ideal
            k = red.key(P)
            if k not in seen:
                seen.add(k)
                gens.append(P)
    n = len(gens)
    one = unit_ideal(F)
    start = red.key(one)
    # breadth-first enumeration of classes with exponent vectors
    elems = {start: ((0,) * n, one)}
    queue = [start]
    lattice = {}
    i = 0
    while i < len(queue):
        k = queue[i]
        i += 1
        vec, rep = elems[k]
        for j, P in enumerate(gens):
            prod = ideal_product_norm(rep, P)
            k2 = red.key(prod)
            v2 = tuple(x + (t == j) for t, x in enumerate(vec))
            if k2 not in elems:
                elems[k2] = (v2, red.reduced_ideal(k2))
                queue.append(k2)
            else:
                rel = [x - y for x, y in zip(v2, elems[k2][0])]
                if any(rel):
                    hnf_add_relation(lattice, rel)
    h = len(elems)
    if n == 0:
        return ClassGroupData(F, (), (), 1, {start: ()}, {(): one})
    R = lattice_rows(lattice, n)
    Dm, _, V = smith_normal_form(R)
    diag = [Dm[t][t] for t in range(n)]
    if math.prod(diag) != h:
        raise RuntimeError(f"class group relation lattice has index {math.prod(diag)}, expected {h}")
    keep = [t for t in range(n) if diag[t] > 1]
    invariants = tuple(diag[t] for t in keep)
    logs = {}
    reps = {}
    for k, (vec, _) in elems.items():
        coords = tuple(
            sum(vec[s] * V[s][t] for s in range(n)) % diag[t] for t in keep
        )
        logs[k] = coords
        # smallest-norm reduced ideal as the representative of each class
        rep = red.reduced_ideal(k)
        if coords not in reps or rep.norm < reps[coords].norm:
            reps[coords] = rep
    generators = []
    for idx in range(len(keep)):
        e = tuple(int(t == idx) for t in range(len(keep)))
        generators.append(reps[e])
    return ClassGroupData(F, invariants, tuple(generators), h, logs, reps)


def p_torsion_basis(C, p):
    """Ideals whose classes form an F_p-basis of Cl[p]."""
    out = []
    for i, d in enumerate(C.invariants):
        if d % p == 0:
            coords = [0] * len(C.invariants)
            coords[i] = d // p
            out.append(C.representative(coords))
    return out


def ideal_in_class_coprime(C, coords, avoid, max_ell=10**5):
    """A prime (or unit) ideal in the given class, coprime to the places in ``avoid``."""
    F = C.field
    coords = tuple(c % d for c, d in zip(coords, C.invariants))
    if not any(coords):
        return unit_ideal(F)
    avoid = {v for v in avoid if v.is_finite}
    for ell in primerange(2, max_ell):
        for v in factor_rational_prime(F, ell):
            if v in avoid or v.splitting == "inert":
                continue
            if C.log(v.prime_ideal) == coords:
                return v.prime_ideal
    return None


# ---------------------------------------------------------------------------
# units
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitData:
    field: Field
    w: int
    torsion_generator: FieldElement
    fundamental_unit: FieldElement | None
    fundamental_norm: int | None

    def generators(self):
        gens = [self.torsion_generator]
        if self.fundamental_unit is not None:
            gens.append(self.fundamental_unit)
        return gens

    def to_json(self):
        return {
            "w": self.w,
            "torsion": self.torsion_generator.to_json(),
            "fundamental": None if self.fundamental_unit is None else self.fundamental_unit.to_json(),
            "fundamental_norm": self.fundamental_norm,
        }


def continued_fraction_convergents(P, Q, D):
    """Convergents (p_k, q_k) of the quadratic irrational (P + sqrt D) / Q."""
    s = isqrt(D)
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    while True:
        a = (P + s) // Q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(F):
    """Smallest unit > 1 of a real quadratic field (embedding 1)."""
    if F.half_integral:
        conv = continued_fraction_convergents(1, 2, F.d)
    else:
        conv = continued_fraction_convergents(0, 1, F.d)
    w = F.element(0, 1)
    wbar = w.conjugate()
    for p, q in conv:
        xi = F.element(p) - w * q
        if abs(xi.norm()) == 1:
            return F.element(p) - wbar * q
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def unit_group(F):
    if F.is_rational:
        return UnitData(F, 2, F.element(-1), None, None)
    if F.d == -1:
        return UnitData(F, 4, F.element(0, 1), None, None)
    if F.d == -3:
        # w = (1 + sqrt -3)/2 is a primitive 6th root of unity
        return UnitData(F, 6, F.element(0, 1), None, None)
    if F.d < 0:
        return UnitData(F, 2, F.element(-1), None, None)
    eps = fundamental_unit(F)
    return UnitData(F, 2, F.element(-1), eps, int(eps.norm()))


# ---------------------------------------------------------------------------
# roots of unity
# ---------------------------------------------------------------------------


def delta_field(F, p):
    """1 if K contains the p-th roots of unity."""
    if p == 2:
        return 1
    if p == 3 and F.d == -3:
        return 1
    return 0


def delta_place(v, p):
    """1 if the completion K_v contains the p-th roots of unity."""
    if v.is_real:
        return 1 if p == 2 else 0
    if v.ell == p:
        raise WildPlace(f"{v} lies above p = {p}")
    return 1 if v.norm % p == 1 else 0
