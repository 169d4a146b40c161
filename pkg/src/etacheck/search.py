"""Bounded enumeration of eta-quotient exponent vectors.

Finds integer vectors w over the divisors of N with |w_d| <= bound satisfying
the two exact linear conditions

    sum_d w_d = 0,        sum_d d*w_d = -24*n0,

plus the remaining modularity conditions and per-cusp sign constraints on the
orders.  The two linear equalities pin the last two coordinates, so the walk
enumerates prefixes in lexicographic order with interval pruning; the first
vector that survives all checks is therefore the lexicographically smallest
solution, which makes every search in this package deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import SpecError
from .eta import EtaQuotient, divisors


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def iter_exponent_vectors(divs, bound: int, total: int, weighted: int):
    """Yield vectors w (tuples aligned with divs) with |w_i| <= bound,
    sum(w) == total and sum(d*w) == weighted, in lexicographic order."""
    divs = tuple(divs)
    k = len(divs)
    if k == 0:
        if total == 0 and weighted == 0:
            yield ()
        return
    if k == 1:
        d = divs[0]
        if abs(total) <= bound and d * total == weighted:
            yield (total,)
        return

    head, d1, d2 = divs[:-2], divs[-2], divs[-1]
    nh = len(head)
    # suffix divisor sums for pruning the weighted form
    suffix_dsum = [0] * (nh + 1)
    for i in range(nh - 1, -1, -1):
        suffix_dsum[i] = suffix_dsum[i + 1] + head[i]
    tail_dmax = d1 + d2

    def solve_tail(s_needed, w_needed):
        num = w_needed - d1 * s_needed
        den = d2 - d1
        if num % den:
            return None
        w2 = num // den
        w1 = s_needed - w2
        if abs(w1) <= bound and abs(w2) <= bound:
            return (w1, w2)
        return None

    prefix = [0] * nh

    def rec(i, s, t):
        if i == nh:
            tail = solve_tail(total - s, weighted - t)
            if tail is not None:
                yield tuple(prefix) + tail
            return
        d = head[i]
        remaining = nh - i - 1
        rem_smax = bound * (remaining + 2)
        rem_tmax = bound * (suffix_dsum[i + 1] + tail_dmax)
        for w in range(-bound, bound + 1):
            s2 = s + w
            if abs(total - s2) > rem_smax:
                continue
            t2 = t + d * w
            if abs(weighted - t2) > rem_tmax:
                continue
            prefix[i] = w
            yield from rec(i + 1, s2, t2)
        prefix[i] = 0

    yield from rec(0, 0, 0)


class OrderConstraints:
    """Per-cusp sign conditions on the order of a candidate quotient:
    strictly positive on `positive`, nonnegative on `nonneg`, exactly zero
    on `zero`.  Cusps are given by canonical representatives of level N."""

    def __init__(self, N: int, positive=(), nonneg=(), zero=()):
        self.N = N
        self.positive = tuple(positive)
        self.nonneg = tuple(nonneg)
        self.zero = tuple(zero)

    def rows(self, divs):
        """(coefficient tuple, kind) per constraint; order = dot(row, w)."""
        out = []
        for kind, cusps in (("pos", self.positive), ("nonneg", self.nonneg), ("zero", self.zero)):
            for x in cusps:
                c = x.c if not x.is_infinity() else self.N
                pref = Fraction(self.N, 24 * gcd(c * c, self.N))
                row = tuple(pref * Fraction(gcd(c, d) ** 2, d) for d in divs)
                out.append((row, kind))
        return out


def search_modular_quotients(N: int, n0: int, bound: int,
                             constraints: OrderConstraints | None = None,
                             limit: int | None = 1):
    """Modular eta quotients at level N with order -n0 at the infinity class,
    |exponents| <= bound, and the given per-cusp order signs.

    Returns up to `limit` EtaQuotients in lexicographic exponent order
    (all survivors when limit is None).
    """
    if bound < 1:
        raise SpecError("exponent bound must be >= 1")
    divs = tuple(divisors(N))
    primes = _prime_factors(N)
    parity_rows = [tuple(_valuation(d, p) & 1 for d in divs) for p in primes]
    inv_weights = tuple(N // d for d in divs)
    rows = constraints.rows(divs) if constraints is not None else []

    found = []
    for w in iter_exponent_vectors(divs, bound, 0, -24 * n0):
        if sum(iw * wi for iw, wi in zip(inv_weights, w)) % 24:
            continue
        if any(sum(pr * abs(wi) for pr, wi in zip(prow, w)) & 1 for prow in parity_rows):
            continue
        ok = True
        for row, kind in rows:
            o = sum(rc * wi for rc, wi in zip(row, w) if wi)
            if kind == "pos" and o <= 0:
                ok = False
                break
            if kind == "nonneg" and o < 0:
                ok = False
                break
            if kind == "zero" and o != 0:
                ok = False
                break
        if not ok:
            continue
        found.append(EtaQuotient(N, dict(zip(divs, w))))
        if limit is not None and len(found) >= limit:
            break
    return found
