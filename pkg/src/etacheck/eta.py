"""Eta quotients and their q-expansions.

An :class:`EtaQuotient` is the formal product of eta(d*tau)**r_d over divisors
d of a level N.  Its q-expansion is the product of the Euler products
(q**d; q**d)_infinity ** r_d times the prefactor q**(sum(d*r_d)/24), which is
carried on the series offset grid so that nothing fractional is ever rounded.

Euler products expand through the pentagonal-number series (sparse, linear
time); the dense finite-product definition is kept in the test suite as an
independent reference.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecError
from .series import QSeries, ZZ


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class EtaQuotient:
    """Level N and exponent vector r indexed by divisors of N.

    Exponents are stored sparsely as a sorted tuple of (divisor, exponent)
    pairs with zero entries dropped; every divisor key must divide the level.
    """

    level: int
    exponents: tuple

    def __init__(self, level: int, exponents):
        if level < 1:
            raise SpecError("level must be a positive integer")
        if isinstance(exponents, dict):
            items = exponents.items()
        else:
            items = exponents
        acc = {}
        for d, r in items:
            d = int(d)
            r = int(r)
            if d < 1 or level % d:
                raise SpecError(f"divisor {d} does not divide level {level}")
            acc[d] = acc.get(d, 0) + r
        packed = tuple(sorted((d, r) for d, r in acc.items() if r != 0))
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "exponents", packed)

    def exponent(self, d: int) -> int:
        for dd, r in self.exponents:
            if dd == d:
                return r
        return 0

    def as_dict(self) -> dict:
        return dict(self.exponents)

    def is_trivial(self) -> bool:
        return not self.exponents

    # weighted sums that the modularity conditions and order formulas use
    def sum_r(self) -> int:
        return sum(r for _, r in self.exponents)

    def sum_dr(self) -> int:
        return sum(d * r for d, r in self.exponents)

    def sum_ndr(self) -> int:
        return sum((self.level // d) * r for d, r in self.exponents)

    def mul(self, other: "EtaQuotient") -> "EtaQuotient":
        if self.level != other.level:
            raise SpecError("eta quotients live at different levels")
        return EtaQuotient(self.level, list(self.exponents) + list(other.exponents))

    def pow(self, n: int) -> "EtaQuotient":
        return EtaQuotient(self.level, [(d, n * r) for d, r in self.exponents])

    def inverse(self) -> "EtaQuotient":
        return self.pow(-1)

    def at_level(self, level: int) -> "EtaQuotient":
        """View the same function on the finer group of the given level."""
        for d, _ in self.exponents:
            if level % d:
                raise SpecError(f"divisor {d} does not divide target level {level}")
        return EtaQuotient(level, self.exponents)

    def scale_tau(self, m: int) -> "EtaQuotient":
        """Replace tau by m*tau: every divisor is multiplied by m, the level too."""
        if m < 1:
            raise SpecError("scaling factor must be >= 1")
        return EtaQuotient(self.level * m, [(m * d, r) for d, r in self.exponents])

    def __repr__(self):
        if not self.exponents:
            return f"EtaQuotient({self.level}: 1)"
        body = ",".join(f"{d}^{r}" for d, r in self.exponents)
        return f"EtaQuotient({self.level}: {body})"


def euler_product(d: int, trunc: int) -> QSeries:
    """(q**d; q**d)_infinity to order ``trunc`` over the exact integers.

    Pentagonal expansion: (q;q)_inf = sum over k in Z of (-1)**k * q**(k(3k-1)/2).
    """
    if d < 1:
        raise SpecError("Euler product index must be a positive integer")
    if trunc < 0:
        raise SpecError("truncation must be >= 0")
    terms = {}
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            e = d * kk * (3 * kk - 1) // 2
            if e < trunc:
                terms[e] = 1 if kk % 2 == 0 else -1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return QSeries.from_terms(ZZ, terms, trunc)


def eta_expand(eq: EtaQuotient, trunc: int) -> QSeries:
    """Expand the quotient as a q-series over the exact integers.

    The returned series has offset24 = sum(d*r_d); its integer-grid part is
    the product of the Euler factors (a unit series, leading coefficient 1)
    known to order ``trunc``.  Use normalize_offset() to fold the prefactor
    once it is known to be integral.
    """
    if trunc < 1:
        raise SpecError("eta expansion needs truncation >= 1")
    out = QSeries.one(ZZ, trunc)
    for d, r in eq.exponents:
        base = euler_product(d, trunc)
        if r < 0:
            factor = base.inv().pow(-r)
        else:
            factor = base.pow(r)
        out = out.mul(factor)
    return QSeries(ZZ, out.coeffs, out.val, out.trunc, eq.sum_dr())


def eta_expand_normalized(eq: EtaQuotient, trunc: int) -> QSeries:
    """Expansion with the prefactor folded into integer exponents.

    ``trunc`` counts coefficients past the leading term, so the result covers
    exponents [sum(d*r_d)/24, sum(d*r_d)/24 + trunc).
    """
    return eta_expand(eq, trunc).normalize_offset()
