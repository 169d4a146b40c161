"""Exact truncated Laurent q-series arithmetic.

A :class:`QSeries` is a finite window of a Laurent series in ``q``: integer
exponents from ``val`` up to (but excluding) ``trunc``, coefficients in one of
three rings (exact integers, exact rationals, integers mod a prime power), and
a global prefactor ``q**(offset24/24)``.  The fractional prefactor exists so
that eta-function expansions, which natively live on the 1/24 exponent grid,
are never silently rounded; folding it into the integer exponents is an
explicit step that fails loudly when 24 does not divide it.

Truncation bookkeeping is pessimistic: every operation reports only the
coefficients its inputs actually determine (``min`` of the operand windows,
shifted by valuations for products and inverses).  Values are immutable and
all operations are pure, so series can be shared freely across threads.

Multiplication packs coefficient blocks into big integers (Kronecker
substitution) so that CPython's subquadratic integer multiplication does the
convolution; this is the single hot spot of the whole package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SpecError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class CoeffRing:
    """Coefficient ring tag: exact integers ('Z'), exact rationals ('Q'),
    or integers modulo ell**power ('Zmod') with canonical representatives
    in [0, ell**power)."""

    kind: str
    ell: int = 0
    power: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zmod"):
            raise SpecError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind == "Zmod":
            if not _is_prime(self.ell):
                raise SpecError(f"modulus base {self.ell} is not prime")
            if self.power < 1:
                raise SpecError("modulus exponent must be >= 1")

    @property
    def modulus(self) -> int:
        if self.kind != "Zmod":
            raise SpecError("only Zmod rings have a modulus")
        return self.ell ** self.power

    def coerce(self, c):
        """Bring an int (or Fraction, for 'Q') into canonical form."""
        if self.kind == "Z":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise SpecError(f"{c} is not an integer")
                return c.numerator
            return int(c)
        if self.kind == "Q":
            return Fraction(c)
        return int(c) % self.modulus

    def is_unit(self, c) -> bool:
        if self.kind == "Z":
            return c in (1, -1)
        if self.kind == "Q":
            return c != 0
        return c % self.ell != 0

    def invert_unit(self, c):
        if not self.is_unit(c):
            raise SpecError(f"{c} is not a unit in {self}")
        if self.kind == "Z":
            return c
        if self.kind == "Q":
            return 1 / Fraction(c)
        return pow(c, -1, self.modulus)

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Q":
            return "Q"
        return f"Z/{self.ell}^{self.power}"


ZZ = CoeffRing("Z")
QQ = CoeffRing("Q")


def zmod(ell: int, power: int) -> CoeffRing:
    return CoeffRing("Zmod", ell, power)


# ---------------------------------------------------------------------------
# Kronecker-substitution convolution.

def _pack(vals, limb_bytes):
    buf = bytearray(limb_bytes * len(vals))
    for i, v in enumerate(vals):
        if v:
            buf[i * limb_bytes:(i + 1) * limb_bytes] = v.to_bytes(limb_bytes, "little")
    return int.from_bytes(buf, "little")


def _unpack(big, limb_bytes, count):
    need = limb_bytes * count
    nb = (big.bit_length() + 7) // 8
    raw = big.to_bytes(max(nb, need), "little")
    return [int.from_bytes(raw[i * limb_bytes:(i + 1) * limb_bytes], "little")
            for i in range(count)]


def _convolve_nonneg(a, b, n_out, coeff_bound):
    # coeff_bound: strict upper bound on any convolution coefficient
    limb_bits = max(coeff_bound.bit_length() + 1, 8)
    limb_bytes = (limb_bits + 7) // 8
    prod = _pack(a, limb_bytes) * _pack(b, limb_bytes)
    return _unpack(prod, limb_bytes, n_out)


def convolve_ints(a, b, n_out):
    """First n_out coefficients of the product of integer coefficient lists."""
    if n_out <= 0 or not a or not b:
        return []
    a = list(a[:n_out])
    b = list(b[:n_out])
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    if max_a == 0 or max_b == 0:
        return [0] * n_out
    bound = max_a * max_b * min(len(a), len(b)) + 1
    if any(c < 0 for c in a) or any(c < 0 for c in b):
        ap = [c if c > 0 else 0 for c in a]
        an = [-c if c < 0 else 0 for c in a]
        bp = [c if c > 0 else 0 for c in b]
        bn = [-c if c < 0 else 0 for c in b]
        pos = _convolve_nonneg(ap, bp, n_out, bound)
        pos2 = _convolve_nonneg(an, bn, n_out, bound)
        neg = _convolve_nonneg(ap, bn, n_out, bound)
        neg2 = _convolve_nonneg(an, bp, n_out, bound)
        return [p + p2 - m - m2 for p, p2, m, m2 in zip(pos, pos2, neg, neg2)]
    return _convolve_nonneg(a, b, n_out, bound)


def _convolve_fractions(a, b, n_out):
    if n_out <= 0 or not a or not b:
        return []
    out = [Fraction(0)] * n_out
    for i, ca in enumerate(a):
        if ca == 0 or i >= n_out:
            continue
        top = min(len(b), n_out - i)
        for j in range(top):
            cb = b[j]
            if cb:
                out[i + j] += ca * cb
    return out


# ---------------------------------------------------------------------------


class QSeries:
    """Truncated Laurent series: sum of coeffs[i]*q**(val+i) for
    val <= val+i < trunc, all times the global prefactor q**(offset24/24).

    The stored leading coefficient is nonzero; the zero series is canonically
    val == trunc with an empty coefficient tuple.
    """

    __slots__ = ("ring", "offset24", "val", "coeffs", "trunc")

    def __init__(self, ring: CoeffRing, coeffs, val: int, trunc: int, offset24: int = 0):
        coeffs = [ring.coerce(c) for c in coeffs]
        if val + len(coeffs) > trunc:
            raise SpecError("coefficient window exceeds truncation")
        if coeffs:
            coeffs.extend([ring.coerce(0)] * (trunc - val - len(coeffs)))
        # strip leading zeros (can appear after Zmod cancellation)
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        coeffs = coeffs[lead:]
        val += lead
        if not coeffs:
            val = trunc
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "offset24", offset24)
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):
        raise AttributeError("QSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: CoeffRing, trunc: int) -> "QSeries":
        return cls(ring, (), trunc, trunc)

    @classmethod
    def from_terms(cls, ring: CoeffRing, terms: dict, trunc: int, offset24: int = 0) -> "QSeries":
        terms = {e: c for e, c in terms.items() if e < trunc}
        if not terms:
            return cls(ring, (), trunc, trunc, offset24)
        lo = min(terms)
        coeffs = [0] * (trunc - lo)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(ring, coeffs, lo, trunc, offset24)

    @classmethod
    def const(cls, ring: CoeffRing, c, trunc: int) -> "QSeries":
        return cls.from_terms(ring, {0: c}, trunc)

    @classmethod
    def one(cls, ring: CoeffRing, trunc: int) -> "QSeries":
        return cls.const(ring, 1, trunc)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int):
        """Coefficient of q**e (on the integer grid relative to the offset)."""
        if e >= self.trunc:
            raise SpecError(f"coefficient q^{e} lies beyond truncation {self.trunc}")
        if e < self.val:
            return self.ring.coerce(0)
        return self.coeffs[e - self.val]

    def leading(self):
        """(exponent, coefficient) of the lowest stored term."""
        if self.is_zero():
            raise SpecError("zero series has no leading term")
        return self.val, self.coeffs[0]

    def terms(self):
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def agrees_with(self, other: "QSeries") -> bool:
        """Coefficient-for-coefficient equality on the shared window."""
        a = self._aligned_to(other.offset24) if self.offset24 != other.offset24 else self
        t = min(a.trunc, other.trunc)
        lo = min(a.val, other.val)
        return all(a.coeff(e) == other.coeff(e) for e in range(lo, t))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.ring == other.ring and self.offset24 == other.offset24
                and self.val == other.val and self.trunc == other.trunc
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.offset24, self.val, self.trunc, self.coeffs))

    def __repr__(self):
        parts = []
        shown = 0
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}*q^{self.val + i}")
            shown += 1
            if shown >= 6:
                parts.append("...")
                break
        body = " + ".join(parts) if parts else "0"
        pre = f"q^({self.offset24}/24) * " if self.offset24 else ""
        return f"<{pre}{body} + O(q^{self.trunc}) over {self.ring}>"

    # -- offset handling ----------------------------------------------------

    def normalize_offset(self) -> "QSeries":
        """Fold the q**(offset24/24) prefactor into the integer exponents.

        Fails unless 24 divides offset24; fractional exponents must never
        be rounded away.
        """
        if self.offset24 == 0:
            return self
        if self.offset24 % 24:
            raise SpecError(f"offset {self.offset24}/24 is not an integer exponent")
        s = self.offset24 // 24
        return QSeries(self.ring, self.coeffs, self.val + s, self.trunc + s, 0)

    def _aligned_to(self, offset24: int) -> "QSeries":
        if self.offset24 == offset24:
            return self
        diff = self.offset24 - offset24
        if diff % 24:
            raise SpecError("series offsets differ by a non-integer exponent")
        s = diff // 24
        return QSeries(self.ring, self.coeffs, self.val + s, self.trunc + s, offset24)

    # -- ring changes -------------------------------------------------------

    def to_rational(self) -> "QSeries":
        if self.ring.kind == "Q":
            return self
        if self.ring.kind != "Z":
            raise SpecError("only exact-integer series convert to rationals")
        return QSeries(QQ, [Fraction(c) for c in self.coeffs], self.val, self.trunc, self.offset24)

    def to_integer(self) -> "QSeries":
        """Rational series with unit denominators back to exact integers."""
        if self.ring.kind == "Z":
            return self
        if self.ring.kind != "Q":
            raise SpecError("only rational series convert back to integers")
        coeffs = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise SpecError(f"coefficient {c} is not an integer")
            coeffs.append(c.numerator)
        return QSeries(ZZ, coeffs, self.val, self.trunc, self.offset24)

    def reduce_mod(self, ell: int, power: int) -> "QSeries":
        """Map an exact-integer series into Z/ell**power, least positive residues."""
        if self.ring.kind != "Z":
            raise SpecError("reduce_mod expects an exact-integer series")
        ring = zmod(ell, power)
        return QSeries(ring, self.coeffs, self.val, self.trunc, self.offset24)

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "QSeries"):
        if self.ring != other.ring:
            raise SpecError(f"ring mismatch: {self.ring} vs {other.ring}")

    def add(self, other: "QSeries") -> "QSeries":
        self._check_ring(other)
        other = other._aligned_to(self.offset24)
        trunc = min(self.trunc, other.trunc)
        if self.is_zero():
            return other.truncate(trunc)
        if other.is_zero():
            return self.truncate(trunc)
        lo = min(self.val, other.val)
        out = [0] * (trunc - lo)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                e = s.val + i
                if e >= trunc:
                    break
                out[e - lo] = out[e - lo] + c
        return QSeries(self.ring, out, lo, trunc, self.offset24)

    def neg(self) -> "QSeries":
        return QSeries(self.ring, [-c for c in self.coeffs], self.val, self.trunc, self.offset24)

    def sub(self, other: "QSeries") -> "QSeries":
        return self.add(other.neg())

    def scale(self, c) -> "QSeries":
        """Scalar multiple c*f."""
        c = self.ring.coerce(c)
        if c == 0:
            return QSeries.zero(self.ring, self.trunc)
        return QSeries(self.ring, [c * x for x in self.coeffs], self.val, self.trunc, self.offset24)

    def mul(self, other: "QSeries") -> "QSeries":
        self._check_ring(other)
        offset = self.offset24 + other.offset24
        trunc = min(self.trunc + other.val, other.trunc + self.val)
        if self.is_zero() or other.is_zero():
            return QSeries(self.ring, (), trunc, trunc, offset)
        val = self.val + other.val
        n_out = trunc - val
        if n_out <= 0:
            return QSeries(self.ring, (), trunc, trunc, offset)
        kind = self.ring.kind
        if kind == "Q":
            out = _convolve_fractions(self.coeffs, other.coeffs, n_out)
        elif kind == "Zmod":
            out = [c % self.ring.modulus
                   for c in convolve_ints(self.coeffs, other.coeffs, n_out)]
        else:
            out = convolve_ints(self.coeffs, other.coeffs, n_out)
        return QSeries(self.ring, out, val, trunc, offset)

    def inv(self) -> "QSeries":
        """Multiplicative inverse, by Newton iteration on the unit part.

        The leading coefficient must be a unit of the ring.
        """
        if self.is_zero():
            raise SpecError("zero series has no inverse")
        lead = self.coeffs[0]
        if not self.ring.is_unit(lead):
            raise SpecError(f"leading coefficient {lead} is not a unit in {self.ring}")
        n = self.trunc - self.val
        a = list(self.coeffs)
        inv0 = self.ring.invert_unit(lead)
        g = [inv0]
        while len(g) < n:
            m = min(2 * len(g), n)
            # g <- g*(2 - a*g) to m terms
            ag = self._conv(a[:m], g, m)
            ag[0] = self.ring.coerce(2 - ag[0])
            for i in range(1, len(ag)):
                ag[i] = self.ring.coerce(-ag[i])
            g = self._conv(g, ag, m)
        return QSeries(self.ring, g, -self.val, self.trunc - 2 * self.val, -self.offset24)

    def _conv(self, a, b, n_out):
        if self.ring.kind == "Q":
            return _convolve_fractions(a, b, n_out)
        out = convolve_ints(a, b, n_out)
        if self.ring.kind == "Zmod":
            m = self.ring.modulus
            out = [c % m for c in out]
        return out

    def pow(self, n: int) -> "QSeries":
        """f**n by binary powering; negative n inverts first."""
        if n == 0:
            return QSeries.one(self.ring, self.trunc - self.val)
        base = self if n > 0 else self.inv()
        n = abs(n)
        result = None
        while n:
            if n & 1:
                result = base if result is None else result.mul(base)
            n >>= 1
            if n:
                base = base.mul(base)
        return result

    def substitute_power(self, d: int) -> "QSeries":
        """f(q**d): exponents, offset and truncation all scale by d."""
        if d < 1:
            raise SpecError("substitution power must be >= 1")
        if d == 1:
            return self
        if self.is_zero():
            return QSeries(self.ring, (), d * self.trunc, d * self.trunc, d * self.offset24)
        out = [0] * (d * (self.trunc - self.val))
        for i, c in enumerate(self.coeffs):
            out[d * i] = c
        return QSeries(self.ring, out, d * self.val, d * self.trunc, d * self.offset24)

    def truncate(self, trunc: int) -> "QSeries":
        """Forget coefficients at exponents >= trunc."""
        if trunc >= self.trunc:
            if trunc > self.trunc:
                raise SpecError("cannot extend a truncated series")
            return self
        if trunc <= self.val:
            return QSeries(self.ring, (), trunc, trunc, self.offset24)
        return QSeries(self.ring, self.coeffs[:trunc - self.val], self.val, trunc, self.offset24)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q**k (integer grid shift)."""
        return QSeries(self.ring, self.coeffs, self.val + k, self.trunc + k, self.offset24)

    # operator sugar
    __add__ = add
    __sub__ = sub
    __neg__ = neg
    __mul__ = mul
    __pow__ = pow
