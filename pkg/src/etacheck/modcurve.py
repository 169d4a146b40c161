"""Cusp arithmetic on Gamma0(N).

Cusps are equivalence classes of Q union {infinity} under the fractional
linear action of Gamma0(N).  Two reduced fractions a/c and a1/c1 represent
the same class exactly when integers m, n exist with gcd(m, N) = 1 and

    m*a1 == a + n*c  (mod N),      c1 == m*c  (mod N).

The class of infinity is represented by 1/N.  Orders of eta quotients at
cusps come from the classical formula

    ord_{a/c}(f) = N / (24*gcd(c^2, N)) * sum_d r_d * gcd(c, d)^2 / d,

measured in the local uniformizer, so the orders of a modular quotient sum
to zero over a full set of representatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .errors import SpecError
from .eta import EtaQuotient, divisors


@dataclass(frozen=True, order=True)
class Cusp:
    """Reduced fraction a/c; infinity itself is written 1/0 and is always
    equivalent to the class of 1/N."""

    c: int
    a: int

    def __init__(self, a: int, c: int):
        if c < 0:
            a, c = -a, -c
        if c == 0:
            if a == 0:
                raise SpecError("0/0 is not a cusp")
            a = 1
        else:
            g = gcd(a, c)
            a //= g
            c //= g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    def is_infinity(self) -> bool:
        return self.c == 0

    def __repr__(self):
        if self.c == 0:
            return "oo"
        if self.c == 1:
            return f"{self.a}"
        return f"{self.a}/{self.c}"


def cusp(a: int, c: int = 1) -> Cusp:
    return Cusp(a, c)


def parse_cusp(text: str) -> Cusp:
    text = text.strip()
    if text in ("oo", "inf", "infinity"):
        return Cusp(1, 0)
    if "/" in text:
        a, c = text.split("/", 1)
        return Cusp(int(a), int(c))
    return Cusp(int(text), 1)


def _euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def cusp_count(N: int) -> int:
    """Number of cusp classes of Gamma0(N)."""
    return sum(_euler_phi(gcd(c, N // c)) for c in divisors(N))


@lru_cache(maxsize=None)
def cusp_representatives(N: int) -> tuple:
    """One canonical representative per cusp class, sorted by (c, a).

    For each divisor c of N the classes are indexed by units modulo
    gcd(c, N/c); each unit is lifted to a numerator coprime to c.  The
    representatives are pairwise inequivalent and every rational is
    equivalent to exactly one of them.
    """
    if N < 1:
        raise SpecError("level must be positive")
    reps = []
    for c in divisors(N):
        g = gcd(c, N // c)
        seen = set()
        for a0 in range(1, g + 1):
            if gcd(a0, g) != 1:
                continue
            a = a0
            while gcd(a, c) != 1:
                a += g
            x = Cusp(a, c)
            # paranoia: distinct units must give inequivalent cusps
            if any(cusp_equivalent(x, y, N) for y in seen):
                continue
            seen.add(x)
        reps.extend(sorted(seen))
    return tuple(reps)


def infinity_class(N: int) -> Cusp:
    """Canonical representative of the class of infinity (that of 1/N)."""
    return canonical_cusp(Cusp(1, N), N)


def cusp_equivalent(x: Cusp, y: Cusp, N: int):
    """Witness (m, n) proving x and y are the same cusp of Gamma0(N), or None.

    m runs over the units modulo N in increasing order; for each m the two
    congruences have a solution in n exactly when gcd(c, N) divides
    m*a1 - a, and the smallest nonnegative n is returned.
    """
    a, c = x.a, x.c % N
    a1, c1 = y.a, y.c % N
    for m in range(1, N + 1):
        if gcd(m, N) != 1:
            continue
        if (m * c - c1) % N:
            continue
        # need n with n*c == m*a1 - a (mod N)
        rhs = (m * a1 - a) % N
        g = gcd(c, N)
        if rhs % g:
            continue
        cc, nn, mm = c // g, rhs // g, N // g
        n = (nn * pow(cc, -1, mm)) % mm if mm > 1 else 0
        return (m, n)
    return None


@lru_cache(maxsize=None)
def _rep_lookup(N: int):
    reps = cusp_representatives(N)
    by_gcd = {}
    for r in reps:
        by_gcd.setdefault(gcd(r.c, N), []).append(r)
    return by_gcd


def canonical_cusp(x: Cusp, N: int) -> Cusp:
    """The canonical representative of x's class (gcd(c, N) narrows the search)."""
    if x.is_infinity():
        x = Cusp(1, N)
    for r in _rep_lookup(N).get(gcd(x.c, N), ()):
        if r == x or cusp_equivalent(x, r, N) is not None:
            return r
    raise SpecError(f"no representative found for {x} at level {N}")


def cusp_image_under_scaling(x: Cusp, r: int, ell: int, targetN: int) -> Cusp:
    """Class of (a + c*r)/(c*ell) over Gamma0(targetN).

    This is the cusp approached by (tau + r)/ell as tau approaches x.
    """
    if not 0 <= r < ell:
        raise SpecError("shift r must lie in 0..ell-1")
    if x.is_infinity():
        raise SpecError("scale the representative 1/N, not the infinity symbol")
    return canonical_cusp(Cusp(x.a + x.c * r, x.c * ell), targetN)


# ---------------------------------------------------------------------------
# Modularity and orders of eta quotients.

def newman_check(eq: EtaQuotient):
    """(is_modular, k0): the four classical conditions for an eta quotient to
    be a modular function on Gamma0(level).

    Conditions: sum r_d = 0; sum d*r_d == 0 (mod 24); sum (N/d)*r_d == 0
    (mod 24); prod d**|r_d| a perfect square (witness k0).
    """
    if eq.sum_r() != 0:
        return False, None
    if eq.sum_dr() % 24:
        return False, None
    if eq.sum_ndr() % 24:
        return False, None
    prod = 1
    for d, r in eq.exponents:
        prod *= d ** abs(r)
    k0 = isqrt(prod)
    if k0 * k0 != prod:
        return False, None
    return True, k0


def eta_order_at_cusp(eq: EtaQuotient, x: Cusp) -> Fraction:
    """Order of the quotient at the cusp a/c, as an exact rational.

    The value depends only on the cusp class; it is an integer whenever the
    quotient is modular, but candidate exponent vectors during searches are
    scored with the same formula, so the rational value is kept.
    """
    N = eq.level
    if x.is_infinity():
        x = Cusp(1, N)
    c = x.c
    total = Fraction(0)
    for d, r in eq.exponents:
        total += Fraction(r * gcd(c, d) ** 2, d)
    return Fraction(N, 24 * gcd(c * c, N)) * total


@dataclass(frozen=True)
class CuspOrderVector:
    """Orders of one eta quotient at every cusp representative of its level."""

    level: int
    entries: tuple  # ((Cusp, Fraction), ...) in representative order

    def order(self, x: Cusp) -> Fraction:
        target = canonical_cusp(x, self.level)
        for cu, o in self.entries:
            if cu == target:
                return o
        raise SpecError(f"{x} is not a cusp of level {self.level}")

    def poles(self) -> tuple:
        return tuple(cu for cu, o in self.entries if o < 0)

    def total(self) -> Fraction:
        return sum((o for _, o in self.entries), Fraction(0))

    def as_dict(self) -> dict:
        return {cu: o for cu, o in self.entries}


def order_vector(eq: EtaQuotient) -> CuspOrderVector:
    reps = cusp_representatives(eq.level)
    return CuspOrderVector(eq.level, tuple((x, eta_order_at_cusp(eq, x)) for x in reps))
