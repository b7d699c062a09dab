"""Exact arithmetic in K = Q or K = Q(sqrt d).

Elements are stored as ``(a + b*w) / den`` over the integral basis ``(1, w)``
where ``w = sqrt(d)`` or ``w = (1 + sqrt(d)) / 2``.  Ideals are stored in
Hermite normal form, places carry everything needed to reduce elements into
their residue fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import (
    AmbiguousPlace,
    DisallowedD,
    FieldMismatch,
    MalformedToken,
    NonSquarefree,
    NoSuchPlace,
    ZeroElement,
)


@lru_cache(maxsize=None)
def prime_factors(n):
    return tuple(sorted(factorint(n)))


def is_squarefree(n):
    return all(e == 1 for e in factorint(abs(n)).values())


def kronecker_prime(D, ell):
    """Kronecker symbol (D | ell) for a prime ell."""
    if ell == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = D % ell
    if r == 0:
        return 0
    return 1 if pow(r, (ell - 1) // 2, ell) == 1 else -1


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Field:
    """Q (``d is None``) or the quadratic field Q(sqrt d)."""

    d: int | None
    disc: int
    r1: int
    r2: int
    half_integral: bool  # True when the ring of integers is Z[(1+sqrt d)/2]

    @property
    def kind(self):
        return "rational" if self.d is None else "quadratic"

    @property
    def is_rational(self):
        return self.d is None

    @property
    def is_real(self):
        return self.r2 == 0

    @property
    def trace_w(self):
        # w^2 = trace_w * w + norm_w
        return 1 if self.half_integral else 0

    @property
    def norm_w(self):
        if self.d is None:
            return 0
        return (self.d - 1) // 4 if self.half_integral else self.d

    @property
    def sqrt_disc(self):
        """sqrt(disc) as an element (sqrt d or 2 sqrt d)."""
        if self.half_integral:
            return self.element(-1, 2)
        return self.element(0, 2)

    def element(self, a, b=0, den=1):
        return FieldElement(self, a, b, den)

    def from_rational(self, x, y=0):
        """The element x + y*sqrt(d) for rationals x, y."""
        x, y = Fraction(x), Fraction(y)
        if self.half_integral:
            # x + y sqrt d = (x - y) + 2y w
            a, b = x - y, 2 * y
        else:
            a, b = x, y
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return FieldElement(self, int(a * den), int(b * den), den)

    def one(self):
        return FieldElement(self, 1, 0, 1)

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt({self.d}))"

    def spec_string(self):
        return "Q" if self.d is None else f"d={self.d}"

    def to_json(self):
        return {
            "kind": self.kind,
            "d": self.d,
            "disc": self.disc,
            "r1": self.r1,
            "r2": self.r2,
        }


RATIONALS = Field(None, 1, 1, 0, False)


def make_field(spec):
    """Build a Field from ``"Q"``, ``"d=-23"``, ``"-23"`` or an integer."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, str):
        s = spec.strip()
        if s.upper() == "Q":
            return RATIONALS
        if s.startswith("d="):
            s = s[2:]
        try:
            d = int(s)
        except ValueError:
            raise MalformedToken(f"cannot parse field spec {spec!r}") from None
    else:
        d = int(spec)
    return _quadratic_field(d)


@lru_cache(maxsize=None)
def _quadratic_field(d):
    if d in (0, 1):
        raise DisallowedD(f"d={d} does not define a quadratic field")
    if not is_squarefree(d):
        raise NonSquarefree(f"d={d} is not squarefree")
    half = d % 4 == 1
    disc = d if half else 4 * d
    r1, r2 = (2, 0) if d > 0 else (0, 1)
    return Field(d, disc, r1, r2, half)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class FieldElement:
    __slots__ = ("field", "a", "b", "den")

    def __init__(self, field, a, b=0, den=1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if b and field.d is None:
            raise FieldMismatch("elements of Q have no w-coordinate")
        if den < 0:
            a, b, den = -a, -b, -den
        g = gcd(gcd(a, b), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _check(self, other):
        if isinstance(other, int):
            return FieldElement(self.field, other)
        if isinstance(other, Fraction):
            return FieldElement(self.field, other.numerator, 0, other.denominator)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch("elements of different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        den = self.den * other.den
        return FieldElement(
            self.field,
            self.a * other.den + other.a * self.den,
            self.b * other.den + other.b * self.den,
            den,
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b, self.den)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        bb = b1 * b2
        return FieldElement(
            F,
            a1 * a2 + F.norm_w * bb,
            a1 * b2 + a2 * b1 + F.trace_w * bb,
            self.den * other.den,
        )

    __rmul__ = __mul__

    def conjugate(self):
        # conj(w) = trace_w - w
        return FieldElement(self.field, self.a + self.field.trace_w * self.b, -self.b, self.den)

    def norm(self):
        F = self.field
        a, b = self.a, self.b
        return Fraction(a * a + F.trace_w * a * b - F.norm_w * b * b, self.den * self.den)

    def trace(self):
        return Fraction(2 * self.a + self.field.trace_w * self.b, self.den)

    def inverse(self):
        if self.is_zero():
            raise ZeroElement("cannot invert zero")
        n = self.norm()
        c = self.conjugate()
        return FieldElement(
            self.field, c.a * n.denominator, c.b * n.denominator, c.den * n.numerator
        )

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_integral(self):
        return self.den == 1

    def sqrt_coords(self):
        """(x, y) rationals with self = x + y sqrt(d)."""
        if self.field.half_integral:
            return (
                Fraction(2 * self.a + self.b, 2 * self.den),
                Fraction(self.b, 2 * self.den),
            )
        return Fraction(self.a, self.den), Fraction(self.b, self.den)

    def sign(self, embedding=1):
        """Sign (+1/-1) of the image under a real embedding, computed exactly.

        Embedding 1 sends sqrt(d) to the positive root, embedding 2 to the
        negative one.
        """
        F = self.field
        if F.d is not None and F.d < 0:
            raise ValueError("imaginary quadratic fields have no real embeddings")
        if self.is_zero():
            raise ZeroElement("zero has no sign")
        x, y = self.sqrt_coords()
        if embedding == 2:
            y = -y
        if y == 0 or F.d is None:
            return 1 if x > 0 else -1
        if x == 0:
            return 1 if y > 0 else -1
        if (x > 0) == (y > 0):
            return 1 if x > 0 else -1
        # opposite signs: compare x^2 with d y^2
        if x * x > F.d * y * y:
            return 1 if x > 0 else -1
        return 1 if y > 0 else -1

    def key(self):
        return (self.a, self.b, self.den)

    def __eq__(self, other):
        if isinstance(other, Rational):
            return self.b == 0 and Fraction(self.a, self.den) == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.den))
        return hash((self.field.d, self.a, self.b, self.den))

    def __repr__(self):
        return f"FieldElement({self.field.spec_string()}, {self.a}, {self.b}, {self.den})"

    def __str__(self):
        F = self.field
        if self.b == 0:
            num = str(self.a)
        else:
            if F.half_integral:
                # (a + b w) = ((2a + b) + b sqrt d) / 2
                x, y, den = 2 * self.a + self.b, self.b, 2 * self.den
                g = gcd(gcd(x, y), den)
                x, y, den = x // g, y // g, den // g
            else:
                x, y, den = self.a, self.b, self.den
            root = f"sqrt({F.d})"
            ypart = root if y == 1 else f"-{root}" if y == -1 else f"{y}*{root}"
            num = ypart if x == 0 else f"{x}{'+' if y > 0 else ''}{ypart}"
            if den != 1:
                return f"({num})/{den}"
            return num
        return num if self.den == 1 else f"{num}/{self.den}"

    def to_json(self):
        return [self.a, self.b, self.den]


def element_from_json(F, data):
    a, b, den = data
    return FieldElement(F, int(a), int(b), int(den))


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


def _hnf_from_vectors(vectors):
    """HNF (a, b, c) of the Z-span of integer vectors (x, y) in basis (1, w).

    The lattice is then ``Z*a + Z*(b + c*w)`` with 0 <= b < a.
    """
    vecs = [(x, y) for x, y in vectors if x or y]
    # gcd over second coordinates, carrying the first
    pivot = None
    rest = []
    for x, y in vecs:
        if y == 0:
            rest.append(x)
            continue
        if pivot is None:
            pivot = (x, y)
            continue
        px, py = pivot
        # extended gcd on (py, y)
        g, s, t = _xgcd(py, y)
        new_pivot = (s * px + t * x, g)
        # the complementary combination has second coordinate 0
        rest.append((y // g) * px - (py // g) * x)
        pivot = new_pivot
    if pivot is None:
        raise ValueError("lattice has rank < 2")
    a = 0
    for x in rest:
        a = gcd(a, x)
    if a == 0:
        raise ValueError("lattice has rank < 2")
    b, c = pivot
    if c < 0:
        b, c = -b, -c
    return a, b % a, c


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class Ideal:
    """Nonzero integral ideal ``Z*a + Z*(b + c*w)`` in Hermite normal form.

    Over Q only ``a`` is meaningful (``b = 0``, ``c = 1``).
    """

    field: Field
    a: int
    b: int
    c: int

    @property
    def norm(self):
        return self.a * self.c

    @property
    def hnf(self):
        return ((self.a, self.b), (0, self.c))

    def basis(self):
        F = self.field
        return F.element(self.a), F.element(self.b, self.c)

    def contains(self, x):
        if not x.is_integral():
            return False
        if self.field.is_rational:
            return x.a % self.a == 0
        if x.b % self.c:
            return False
        k = x.b // self.c
        return (x.a - k * self.b) % self.a == 0

    def __mul__(self, other):
        return ideal_product_norm(self, other)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers of integral ideals are not integral")
        result = unit_ideal(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        if self.field.is_rational:
            return self
        x, y = self.basis()
        return ideal_from_generators(self.field, [x.conjugate(), y.conjugate()])

    def is_unit(self):
        return self.norm == 1

    def content(self):
        return gcd(gcd(self.a, self.b), self.c)

    def to_json(self):
        return [self.a, self.b, self.c]

    def __repr__(self):
        return f"Ideal({self.field.spec_string()}, [[{self.a}, {self.b}], [0, {self.c}]])"


def ideal_from_json(F, data):
    a, b, c = data
    return Ideal(F, int(a), int(b), int(c))


def unit_ideal(F):
    return Ideal(F, 1, 0, 1)


def ideal_from_generators(F, gens):
    """Ideal generated (as an O_K-ideal) by integral elements ``gens``."""
    if F.is_rational:
        g = 0
        for x in gens:
            if not x.is_integral():
                raise ValueError("generators must be integral")
            g = gcd(g, x.a)
        if g == 0:
            raise ZeroElement("zero ideal")
        return Ideal(F, g, 0, 1)
    w = F.element(0, 1)
    vecs = []
    for x in gens:
        if not x.is_integral():
            raise ValueError("generators must be integral")
        xw = x * w
        vecs.append((x.a, x.b))
        vecs.append((xw.a, xw.b))
    if not any(x or y for x, y in vecs):
        raise ZeroElement("zero ideal")
    a, b, c = _hnf_from_vectors(vecs)
    return Ideal(F, a, b, c)


def principal_ideal(x):
    if x.is_zero():
        raise ZeroElement("zero ideal")
    return ideal_from_generators(x.field, [x])


def ideal_product_norm(A, B):
    """Product of two ideals as a canonical HNF."""
    if A.field != B.field:
        raise FieldMismatch("ideals of different fields")
    F = A.field
    if F.is_rational:
        return Ideal(F, A.a * B.a, 0, 1)
    xa, ya = A.basis()
    xb, yb = B.basis()
    vecs = []
    for u in (xa * xb, xa * yb, ya * xb, ya * yb):
        vecs.append((u.a, u.b))
    a, b, c = _hnf_from_vectors(vecs)
    return Ideal(F, a, b, c)


# ---------------------------------------------------------------------------
# Residue fields
# ---------------------------------------------------------------------------


class ResidueField:
    """F_q for q = ell or ell^2.

    Degree-2 elements are pairs ``(x, y)`` meaning ``x + y*t`` with
    ``t^2 = c1*t + c0``; for odd ell the generator t is the image of sqrt(d)
    (so ``c1 = 0``, ``c0 = d``), for ell = 2 it is the image of w.
    Degree-1 elements are plain ints mod ell.
    """

    def __init__(self, ell, degree, c1=0, c0=0):
        self.ell = ell
        self.degree = degree
        self.q = ell**degree
        self.c1 = c1 % ell
        self.c0 = c0 % ell
        self._generators = []
        self._gen_cursor = None
        self.generator = self.nth_generator(0)

    # arithmetic on raw representations
    def one(self):
        return 1 if self.degree == 1 else (1, 0)

    def mul(self, u, v):
        ell = self.ell
        if self.degree == 1:
            return u * v % ell
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        return ((x1 * x2 + yy * self.c0) % ell, (x1 * y2 + x2 * y1 + yy * self.c1) % ell)

    def pow(self, u, e):
        if self.degree == 1:
            return pow(u, e, self.ell)
        e %= self.q - 1
        result = (1, 0)
        while e:
            if e & 1:
                result = self.mul(result, u)
            u = self.mul(u, u)
            e >>= 1
        return result

    def inv(self, u):
        if self.is_zero(u):
            raise ZeroElement("zero has no inverse in the residue field")
        return self.pow(u, self.q - 2)

    def is_zero(self, u):
        return u == 0 if self.degree == 1 else u == (0, 0)

    def from_int(self, n):
        return n % self.ell if self.degree == 1 else (n % self.ell, 0)

    def order(self, u):
        n = self.q - 1
        for r in prime_factors(n) if n > 1 else ():
            while n % r == 0 and self.pow(u, n // r) == self.one():
                n //= r
        return n

    def is_generator(self, u):
        if self.is_zero(u):
            return False
        n = self.q - 1
        one = self.one()
        return all(self.pow(u, n // r) != one for r in (prime_factors(n) if n > 1 else ()))

    def _candidates(self):
        if self.degree == 1:
            yield from range(1, self.ell)
        else:
            # ordered by (y, x): x + t, x + 2t, ...
            for y in range(self.ell):
                for x in range(self.ell):
                    if (x, y) != (0, 0):
                        yield (x, y)

    def nth_generator(self, k):
        """The k-th multiplicative generator in canonical enumeration order.

        k wraps around modulo the number of generators, so every index is
        usable even in F_3.
        """
        if self._gen_cursor is None:
            self._gen_cursor = self._candidates()
        while len(self._generators) <= k and self._gen_cursor is not False:
            for u in self._gen_cursor:
                if self.is_generator(u):
                    self._generators.append(u)
                    break
            else:
                self._gen_cursor = False
        return self._generators[k % len(self._generators)]

    def dlog(self, u, g=None):
        """Discrete log of u to base g (default: the canonical generator)."""
        if g is None:
            g = self.generator
        n = self.q - 1
        if n == 1:
            return 0
        x = 0
        modulus = 1
        for r, e in factorint(n).items():
            # Pohlig-Hellman on the r-part
            re = r**e
            gr = self.pow(g, n // re)
            ur = self.pow(u, n // re)
            gamma = self.pow(gr, re // r)  # order r
            xr = 0
            for k in range(e):
                hk = self.mul(self.pow(self.inv(gr), xr), ur)
                hk = self.pow(hk, re // r ** (k + 1))
                dk = self._small_log(gamma, hk, r)
                xr += dk * r**k
            # CRT merge
            x = _crt(x, modulus, xr, re)
            modulus *= re
        return x % n

    def _small_log(self, gamma, h, r):
        cur = self.one()
        for k in range(r):
            if cur == h:
                return k
            cur = self.mul(cur, gamma)
        raise ValueError("element not in the subgroup")

    def __repr__(self):
        return f"ResidueField(q={self.q})"


def _crt(x1, m1, x2, m2):
    g, s, _ = _xgcd(m1, m2)
    assert g == 1
    return (x1 + (x2 - x1) * s % m2 * m1) % (m1 * m2)


# ---------------------------------------------------------------------------
# Places
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A finite prime of K or a real embedding.

    For finite places of degree 1, ``w_image`` is the image of the basis
    element w in F_ell.  ``branch`` is 1 or 2 for split primes, 0 otherwise.
    """

    field: Field
    kind: str  # "finite" | "real"
    ell: int = 0
    splitting: str = ""  # "split" | "inert" | "ramified" | "rational"
    branch: int = 0
    index: int = 0  # real embedding index
    w_image: int = 0
    root: int = 0  # chosen square root of d mod ell (split / ramified)
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def _ident(self):
        return (self.field.d, self.kind, self.ell, self.branch, self.index)

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        return self._ident() == other._ident()

    def __hash__(self):
        h = self._cache.get("hash")
        if h is None:
            h = self._cache["hash"] = hash(self._ident())
        return h

    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def is_real(self):
        return self.kind == "real"

    @property
    def degree(self):
        return 2 if self.splitting == "inert" else 1

    @property
    def ram_index(self):
        return 2 if self.splitting == "ramified" else 1

    @property
    def norm(self):
        if not self.is_finite:
            raise ValueError("archimedean places have no norm")
        return self.ell**self.degree

    @property
    def q(self):
        return self.norm

    @property
    def token(self):
        if self.is_real:
            if self.field.is_rational:
                return "inf"
            return f"inf.{self.index}"
        if self.splitting == "split":
            return f"{self.ell}.{self.branch}"
        return str(self.ell)

    def sort_key(self):
        if self.is_real:
            return (1, 0, self.index)
        return (0, self.ell, self.branch)

    def __str__(self):
        return self.token

    def __repr__(self):
        return f"Place({self.field.spec_string()}, {self.token!r})"

    # -- finite-place data -------------------------------------------------

    @property
    def prime_ideal(self):
        c = self._cache
        if "ideal" not in c:
            F = self.field
            if F.is_rational:
                c["ideal"] = Ideal(F, self.ell, 0, 1)
            elif self.splitting == "inert":
                c["ideal"] = principal_ideal(F.element(self.ell))
            else:
                c["ideal"] = ideal_from_generators(
                    F, [F.element(self.ell), F.element(-self.w_image, 1)]
                )
        return c["ideal"]

    @property
    def residue_field(self):
        c = self._cache
        if "rf" not in c:
            F = self.field
            if self.degree == 1:
                c["rf"] = ResidueField(self.ell, 1)
            elif self.ell == 2:
                c["rf"] = ResidueField(2, 2, F.trace_w, F.norm_w)
            else:
                c["rf"] = ResidueField(self.ell, 2, 0, F.d)
        return c["rf"]

    def _anti_uniformizer(self):
        """beta with beta*P inside (ell) and v_P(beta) = e - 1."""
        c = self._cache
        if "beta" not in c:
            F = self.field
            if self.splitting in ("inert", "rational"):
                beta = F.one()
            elif self.splitting == "ramified":
                beta = F.element(-self.w_image, 1)
            else:
                other = self.conjugate_place()
                beta = F.element(-other.w_image, 1)
            c["beta"] = beta
        return c["beta"]

    def reduce_integral(self, x):
        """Image in the residue field of an integral element."""
        ell = self.ell
        if self.degree == 1:
            return (x.a + x.b * self.w_image) % ell
        if ell == 2 or not self.field.half_integral:
            return (x.a % ell, x.b % ell)
        # w = (1 + t)/2 with t = sqrt(d)
        inv2 = (ell + 1) // 2
        return ((x.a + x.b * inv2) % ell, x.b * inv2 % ell)

    def _strip(self, x):
        """(m, y) with x integral nonzero, y = x * (beta/ell)^m integral, v_P(y) = 0."""
        F = self.field
        beta = self._anti_uniformizer()
        rf = self.residue_field
        m = 0
        while rf.is_zero(self.reduce_integral(x)):
            y = x * beta
            x = FieldElement(F, y.a // self.ell, y.b // self.ell, 1)
            m += 1
        return m, x

    @property
    def uniformizer(self):
        """Lexicographically smallest HNF basis vector of P with valuation 1."""
        c = self._cache
        if "pi" not in c:
            F = self.field
            P = self.prime_ideal
            if F.is_rational:
                c["pi"] = F.element(self.ell)
            else:
                cands = sorted([(P.a, 0), (P.b, P.c)])
                chosen = None
                for a, b in cands:
                    x = F.element(a, b)
                    if self._strip(x)[0] == 1:
                        chosen = x
                        break
                if chosen is None:
                    # b + c*w + k*a for small k
                    for k in range(1, 4):
                        x = F.element(P.b + k * P.a, P.c)
                        if self._strip(x)[0] == 1:
                            chosen = x
                            break
                if chosen is None:
                    raise RuntimeError(f"no uniformizer found for {self!r}")
                c["pi"] = chosen
        return c["pi"]

    def _unit_factor(self):
        """Residue of pi * beta / ell, which has valuation 0."""
        c = self._cache
        if "pibeta" not in c:
            F = self.field
            y = self.uniformizer * self._anti_uniformizer()
            z = FieldElement(F, y.a // self.ell, y.b // self.ell, 1)
            c["pibeta"] = self.reduce_integral(z)
        return c["pibeta"]

    def _val_reduce_integral(self, x):
        m, y = self._strip(x)
        rf = self.residue_field
        u = self.reduce_integral(y)
        if m:
            u = rf.mul(u, rf.pow(rf.inv(self._unit_factor()), m))
        return m, u

    def valuation(self, x):
        return valuation_and_reduce(self, x)[0]

    def conjugate_place(self):
        """Image under the nontrivial automorphism of K (swaps .1 and .2 labels)."""
        if self.is_real:
            if self.field.is_rational:
                return self
            return real_places(self.field)[2 - self.index]
        if self.splitting != "split":
            return self
        return _places_above(self.field, self.ell)[3 - self.branch]

    def to_json(self):
        return self.token


def valuation_and_reduce(v, x):
    """(m, u): the v-adic valuation of x and the residue of x * pi^(-m)."""
    if not v.is_finite:
        raise ValueError("valuation_and_reduce needs a finite place")
    if x.field != v.field:
        raise FieldMismatch("element and place belong to different fields")
    if x.is_zero():
        raise ZeroElement("the zero element has no valuation")
    rf = v.residue_field
    F = x.field
    num = FieldElement(F, x.a, x.b, 1)
    m, u = v._val_reduce_integral(num)
    if x.den != 1:
        den = x.den
        k = 0
        while den % v.ell == 0:
            den //= v.ell
            k += 1
        md, ud = (0, rf.one())
        if k:
            me, ue = v._val_reduce_integral(F.element(v.ell))
            md, ud = me * k, rf.pow(ue, k)
        ud = rf.mul(ud, rf.from_int(den))
        m -= md
        u = rf.mul(u, rf.inv(ud))
    return m, u


def _w_roots_mod(F, ell):
    """Roots of the minimal polynomial of w modulo ell."""
    t, n = F.trace_w, F.norm_w
    return [x for x in range(ell) if (x * x - t * x - n) % ell == 0]


@lru_cache(maxsize=None)
def _places_above(F, ell):
    """Tuple of places above ell: (P,) or (P, P1, P2) for split ell (index 0 unused)."""
    if F.is_rational:
        return (Place(F, "finite", ell, "rational", w_image=0),)
    k = kronecker_prime(F.disc, ell)
    if k == -1:
        return (Place(F, "finite", ell, "inert"),)
    if k == 0:
        (w0,) = set(_w_roots_mod(F, ell))
        root = F.d % 2 if ell == 2 else 0
        return (Place(F, "finite", ell, "ramified", w_image=w0, root=root),)
    if ell == 2:
        # branches labelled by the root of w's minimal polynomial mod 2
        labelled = [(w, w) for w in _w_roots_mod(F, 2)]
    else:
        roots = sorted(sqrt_mod(F.d % ell, ell, all_roots=True))
        inv2 = (ell + 1) // 2
        labelled = [
            (r, (1 + r) * inv2 % ell if F.half_integral else r) for r in roots
        ]
    p1 = Place(F, "finite", ell, "split", branch=1, w_image=labelled[0][1], root=labelled[0][0])
    p2 = Place(F, "finite", ell, "split", branch=2, w_image=labelled[1][1], root=labelled[1][0])
    return (p1, p1, p2)


def factor_rational_prime(F, ell):
    """Places of F above the rational prime ell."""
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    places = _places_above(F, ell)
    return list(places[1:]) if len(places) == 3 else list(places)


def real_places(F):
    if F.is_rational:
        return [Place(F, "real", index=1)]
    if F.d < 0:
        return []
    return [Place(F, "real", index=1), Place(F, "real", index=2)]


def parse_place(F, token):
    """Parse a place token: ``"5"``, ``"5.1"``, ``"inf"``, ``"inf.2"``."""
    if not isinstance(token, str):
        token = str(token)
    tok = token.strip().lower()
    head, _, tail = tok.partition(".")
    branch = None
    if tail:
        if tail not in ("1", "2"):
            raise MalformedToken(f"bad branch in {token!r}")
        branch = int(tail)
    if head in ("inf", "oo", "infinity"):
        reals = real_places(F)
        if not reals:
            raise NoSuchPlace(f"{F} has no real places")
        if branch is None:
            if len(reals) > 1:
                raise AmbiguousPlace(f"{token!r}: {F} has two real places")
            return reals[0]
        if branch > len(reals):
            raise NoSuchPlace(f"{F} has no real place {token!r}")
        return reals[branch - 1]
    if not head.isdigit():
        raise MalformedToken(f"cannot parse place token {token!r}")
    ell = int(head)
    if not isprime(ell):
        raise NoSuchPlace(f"{ell} is not prime")
    places = factor_rational_prime(F, ell)
    if branch is None:
        if len(places) > 1:
            raise AmbiguousPlace(f"{ell} splits in {F}; use {ell}.1 or {ell}.2")
        return places[0]
    if len(places) == 1:
        raise NoSuchPlace(f"{ell} does not split in {F}")
    return places[branch - 1]


def parse_places(F, tokens):
    if isinstance(tokens, str):
        tokens = [t for t in tokens.split(",") if t.strip()]
    return [t if isinstance(t, Place) else parse_place(F, t) for t in tokens]
