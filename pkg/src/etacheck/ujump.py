"""The U_ell operator, stability exponents, and the cached image table.

U_ell keeps the coefficients whose exponent is divisible by ell and divides
the exponents by ell.  Applied to A**i * t**j * g_k it can leave the
single-pole module, but multiplying by t**m(i,j,k) first, with

    m(i,j,k) = i*m_A + |j| * (m_t if j > 0 else m_{1/t}) + m_k,

pushes the image back inside, where the greedy reduction expresses it over
the basis with exact integer coefficients.  Shifting the result by t**(-m)
gives the image as a Laurent module element, the fundamental table every
verification run is linear algebra over.

Each stability exponent m_f is the least m with

    m * ord(t(ell*tau)) + ord(f) >= 0

at every cusp of the finer level except infinity; images are memoized in
memory and optionally on disk, keyed by a fingerprint of the basis, the
auxiliary quotient A and ell.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

from .basis import AlgebraBasis, BasisFunction, mw_reduce
from .errors import ContractError, SpecError
from .eta import EtaQuotient, eta_expand_normalized
from .modcurve import cusp_representatives, eta_order_at_cusp, infinity_class, newman_check
from .series import CoeffRing, QSeries, ZZ, zmod


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FamilyGenerator:
    """The data defining one congruence family's generating function:
    G(q) = prod over divisors d of M of (q**d; q**d)_inf ** r_d, studied
    ell-adically for a prime ell > 3.

    The standing smallness assumption 0 <= -sum(d*r_d) <= 24/(ell+1) keeps
    the auxiliary quotient A holomorphic at infinity with an integral
    exponent shift.
    """

    M: int
    r: tuple
    ell: int

    def __init__(self, M: int, r, ell: int):
        if M < 1:
            raise SpecError("M must be a positive integer")
        if not _is_prime(ell) or ell <= 3:
            raise SpecError(f"ell must be a prime greater than 3, got {ell}")
        if isinstance(r, dict):
            items = sorted(r.items())
        else:
            items = sorted(r)
        for d, _ in items:
            if d < 1 or M % d:
                raise SpecError(f"divisor {d} does not divide M={M}")
        packed = tuple((int(d), int(e)) for d, e in items if e)
        wsum = sum(d * e for d, e in packed)
        if not (0 <= -wsum * (ell + 1) <= 24):
            raise SpecError(
                f"sum d*r_d = {wsum} violates 0 <= {-wsum} <= 24/(ell+1)")
        if (1 - ell * ell) * wsum % 24:
            raise SpecError("the exponent shift (1-ell^2)*sum(d*r_d)/24 is not integral")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "r", packed)
        object.__setattr__(self, "ell", ell)

    def series(self, trunc: int) -> QSeries:
        """The generating function G(q) over the exact integers."""
        from .eta import euler_product
        out = QSeries.one(ZZ, trunc)
        for d, e in self.r:
            base = euler_product(d, trunc)
            out = out.mul(base.inv().pow(-e) if e < 0 else base.pow(e))
        return out

    def coefficients(self, count: int) -> list:
        f = self.series(count)
        return [f.coeff(n) for n in range(count)]

    def first_progression(self) -> tuple:
        """(ell, lambda): a(ell*n + lambda) is the subsequence the first
        U-step isolates, lambda = ell + (ell**2 - 1)/24 * sum(d*r_d) mod ell."""
        lam = (self.ell + (self.ell ** 2 - 1) // 24 * sum(d * e for d, e in self.r)) % self.ell
        return self.ell, lam


def build_A(gen: FamilyGenerator) -> EtaQuotient:
    """The auxiliary quotient A = q**shift * G(q)/G(q**ell^2) at level ell^2*M.

    In eta terms the exponent r_d moves to d and -r_d to ell^2*d; the
    q-power shift (1-ell^2)*sum(d*r_d)/24 is exactly the offset the eta
    prefactors produce, so the expansion lives on integer exponents.
    """
    ell2 = gen.ell ** 2
    exps = {}
    for d, e in gen.r:
        exps[d] = exps.get(d, 0) + e
        exps[ell2 * d] = exps.get(ell2 * d, 0) - e
    A = EtaQuotient(ell2 * gen.M, exps)
    if A.sum_dr() % 24:
        raise ContractError("A's weighted degree is not divisible by 24")
    return A


def u_ell(f: QSeries, ell: int) -> QSeries:
    """Keep exponents divisible by ell and divide them by ell.

    The input must sit on integer exponents (offset a multiple of 24);
    a coefficient of the output at e is known exactly when ell*e was in
    view, so the truncation becomes ceil(trunc/ell).
    """
    if f.offset24 % 24:
        raise SpecError("U_ell needs integer exponents; normalize the offset first")
    f = f.normalize_offset()
    trunc = -(-f.trunc // ell)
    if f.is_zero():
        return QSeries(f.ring, (), trunc, trunc)
    terms = {}
    start = f.val + (-f.val) % ell
    for e in range(start, f.trunc, ell):
        c = f.coeffs[e - f.val]
        if c:
            terms[e // ell] = c
    return QSeries.from_terms(f.ring, terms, trunc)


@dataclass(frozen=True)
class StabilityExponents:
    """Minimal t-powers taming each fundamental image; m_g[k-1] is the
    exponent for g_k, and the constant g_0 needs none."""

    m_A: int
    m_t: int
    m_negt: int
    m_g: tuple

    def exponent(self, i: int, j: int, k: int) -> int:
        if i not in (0, 1):
            raise SpecError("only A-powers 0 and 1 are supported")
        if not 0 <= k <= len(self.m_g):
            raise SpecError(f"basis index {k} out of range")
        mk = 0 if k == 0 else self.m_g[k - 1]
        if j > 0:
            return i * self.m_A + j * self.m_t + mk
        if j < 0:
            return i * self.m_A + (-j) * self.m_negt + mk
        return i * self.m_A + mk


def stability_exponent(se: StabilityExponents, i: int, j: int, k: int) -> int:
    return se.exponent(i, j, k)


def _min_taming_power(ord_t_scaled: dict, f_orders: dict, what: str) -> int:
    """Least m >= 0 with m*ord(t(ell*tau)) + ord(f) >= 0 at every listed cusp."""
    m = 0
    for x, of in f_orders.items():
        ot = ord_t_scaled[x]
        if of >= 0:
            continue
        if ot <= 0:
            raise ContractError(
                f"{what} has a pole at {x} where t(ell*tau) has order {ot}; "
                "no power of t can cancel it (bad generator)")
        need = -(-(-of) // ot)  # ceil(-of / ot)
        m = max(m, need)
    for x, of in f_orders.items():
        if m * ord_t_scaled[x] + of < 0:
            raise ContractError(f"{what}: no taming power works at {x}")
    return m


def quotient_taming_power(b: AlgebraBasis, eq: EtaQuotient, ell: int) -> int:
    """Minimal m with t(ell*tau)**m * eq free of poles away from infinity,
    orders taken over Gamma0(ell * level)."""
    N = b.level
    cusps = [x for x in cusp_representatives(ell * N) if x != infinity_class(ell * N)]
    t_scaled = b.t_quotient().scale_tau(ell)
    ord_t_scaled = {x: eta_order_at_cusp(t_scaled, x) for x in cusps}
    fine = eq.at_level(ell * N)
    orders = {x: eta_order_at_cusp(fine, x) for x in cusps}
    return _min_taming_power(ord_t_scaled, orders, repr(eq))


def compute_m_constants(b: AlgebraBasis, A: EtaQuotient, ell: int) -> StabilityExponents:
    """Stability exponents for A, t, 1/t and each basis function.

    Orders are taken over Gamma0(ell*N) at every cusp except infinity.
    A compound basis function needs the max over its terms of the summed
    exponents of the factors (products add, sums take the worst case).
    """
    N = b.level
    if A.level != ell * N:
        raise SpecError(f"A must live at level {ell * N}")
    cusps = [x for x in cusp_representatives(ell * N) if x != infinity_class(ell * N)]
    t_eq = b.t_quotient()
    t_scaled = t_eq.scale_tau(ell)
    ord_t_scaled = {x: eta_order_at_cusp(t_scaled, x) for x in cusps}
    for x, o in ord_t_scaled.items():
        if o.denominator != 1:
            raise ContractError("non-integral order for a modular quotient")

    def quotient_m(eq: EtaQuotient, what: str) -> int:
        fine = eq.at_level(ell * N)
        orders = {x: eta_order_at_cusp(fine, x) for x in cusps}
        return _min_taming_power(ord_t_scaled, orders, what)

    memo = {}

    def cached_quotient_m(eq: EtaQuotient, what: str) -> int:
        if eq not in memo:
            memo[eq] = quotient_m(eq, what)
        return memo[eq]

    def function_m(fn: BasisFunction) -> int:
        best = 0
        for _, factors in fn.construction:
            best = max(best, sum(cached_quotient_m(f, fn.name) for f in factors))
        return best

    m_a = quotient_m(A, "A")
    m_t = cached_quotient_m(t_eq, "t")
    m_negt = cached_quotient_m(t_eq.inverse(), "1/t")
    m_g = tuple(function_m(g) for g in b.gs)
    return StabilityExponents(m_a, m_t, m_negt, m_g)


class ModuleElement:
    """Finite sum of c[j,k] * t**j * g_k with nonzero coefficients only."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: CoeffRing, terms: dict):
        clean = {}
        for (j, k), c in terms.items():
            c = ring.coerce(c)
            if c != 0:
                clean[(int(j), int(k))] = c
        self.ring = ring
        self.terms = clean

    @classmethod
    def one(cls, ring: CoeffRing) -> "ModuleElement":
        return cls(ring, {(0, 0): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def reduce_mod(self, ell: int, power: int) -> "ModuleElement":
        if self.ring.kind != "Z":
            raise SpecError("only exact-integer elements reduce")
        return ModuleElement(zmod(ell, power), self.terms)

    def scaled_into(self, c, acc: dict, modulus: int | None):
        for key, v in self.terms.items():
            val = acc.get(key, 0) + c * v
            if modulus is not None:
                val %= modulus
            if val:
                acc[key] = val
            elif key in acc:
                del acc[key]

    def j_range(self) -> tuple:
        if not self.terms:
            return (0, 0)
        js = [j for j, _ in self.terms]
        return (min(js), max(js))

    def min_ell_valuation(self, ell: int, cap: int) -> int:
        """Largest v <= cap with ell**v dividing every nonzero coefficient
        (cap if there are none)."""
        best = cap
        for c in self.terms.values():
            v = 0
            while v < best and c % ell == 0:
                c //= ell
                v += 1
            best = min(best, v)
            if best == 0:
                break
        return best

    def __eq__(self, other):
        return (isinstance(other, ModuleElement)
                and self.ring == other.ring and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "<0>"
        bits = []
        for (j, k) in sorted(self.terms):
            c = self.terms[(j, k)]
            mono = []
            if j:
                mono.append(f"t^{j}" if j != 1 else "t")
            if k:
                mono.append(f"g{k}")
            body = "*".join(mono) if mono else "1"
            bits.append(f"{c}*{body}")
        return "<" + " + ".join(bits) + f" over {self.ring}>"


def module_element_series(me: ModuleElement, b: AlgebraBasis, trunc: int) -> QSeries:
    """Honest q-expansion of a module element, over the element's ring."""
    v1 = b.v + 1
    deepest = 0
    for (j, k) in me.terms:
        n_k = -b.gs[k - 1].ord_inf if k else 0
        deepest = max(deepest, v1 * j + n_k)  # = trunc - val(t^j g_k), sans trunc
    prec = trunc + deepest + v1
    out = QSeries.zero(ZZ, trunc)
    for (j, k), c in sorted(me.terms.items()):
        s = b.monomial(j, k, prec)
        out = out.add(s.truncate(min(s.trunc, trunc)).scale(int(c)))
    if me.ring.kind == "Zmod":
        return out.reduce_mod(me.ring.ell, me.ring.power)
    return out


class UImageTable:
    """Memoized images t**(-m) * [t**m * U_ell(A**i t**j g_k)] over Z.

    Disk layout (one file per key under cache_dir/<fingerprint>/):
        header  "level ell i j k v"
        lines   "j k coefficient"
    """

    SLACK = 16  # spare coefficients the reduction consumes as a corruption check

    def __init__(self, b: AlgebraBasis, A: EtaQuotient, ell: int, cache_dir=None):
        if not newman_check(A)[0]:
            raise SpecError("A fails the modularity conditions")
        self.basis = b
        self.A = A
        self.ell = ell
        self.se = compute_m_constants(b, A, ell)
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._mem = {}
        self._a_series = None

    def fingerprint(self) -> str:
        blob = repr((self.basis.fingerprint(), self.A.level, self.A.exponents, self.ell))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    # -- persistence ---------------------------------------------------------

    def _path(self, i, j, k) -> Path:
        return self.cache_dir / self.fingerprint() / f"i{i}_j{j}_k{k}.txt"

    def _load(self, i, j, k):
        p = self._path(i, j, k)
        if not p.exists():
            return None
        lines = p.read_text().splitlines()
        head = tuple(int(x) for x in lines[0].split())
        if head != (self.basis.level, self.ell, i, j, k, self.basis.v):
            raise ContractError(f"cache file {p} does not match its key")
        terms = {}
        for line in lines[1:]:
            if line.strip():
                jj, kk, c = line.split()
                terms[(int(jj), int(kk))] = int(c)
        return ModuleElement(ZZ, terms)

    def _store(self, i, j, k, me: ModuleElement):
        p = self._path(i, j, k)
        p.parent.mkdir(parents=True, exist_ok=True)
        rows = [f"{self.basis.level} {self.ell} {i} {j} {k} {self.basis.v}"]
        for (jj, kk) in sorted(me.terms):
            rows.append(f"{jj} {kk} {me.terms[(jj, kk)]}")
        tmp = p.with_suffix(".tmp")
        tmp.write_text("\n".join(rows) + "\n")
        os.replace(tmp, p)  # first writer wins, readers never see partial files

    # -- computation ---------------------------------------------------------

    def _a_expansion(self, prec: int) -> QSeries:
        if self._a_series is None or self._a_series.trunc - self._a_series.val < prec:
            self._a_series = eta_expand_normalized(self.A, prec)
        return self._a_series

    def image(self, i: int, j: int, k: int) -> ModuleElement:
        key = (i, j, k)
        if key in self._mem:
            return self._mem[key]
        me = self._load(i, j, k) if self.cache_dir else None
        if me is None:
            me = self._compute(i, j, k)
            if self.cache_dir:
                self._store(i, j, k, me)
        self._mem[key] = me
        return me

    def warm(self, keys, threads: int = 1):
        """Precompute a batch of images; distinct keys are independent and the
        memo is first-writer-wins, so concurrent computation is safe (the
        interpreter still serializes the arithmetic)."""
        todo = sorted({tuple(k) for k in keys} - set(self._mem))
        if threads <= 1 or len(todo) <= 1:
            for key in todo:
                self.image(*key)
            return
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda key: self.image(*key), todo))

    def _compute(self, i, j, k) -> ModuleElement:
        b = self.basis
        ell = self.ell
        m = self.se.exponent(i, j, k)
        v1 = b.v + 1
        n_k = 0 if k == 0 else -b.gs[k - 1].ord_inf
        prec = ell * (v1 * m + self.SLACK) + v1 * (abs(j) + i + 2) + n_k + 2 * self.SLACK
        for _ in range(4):
            f = b.monomial(j, k, prec)
            if i:
                a = self._a_expansion(prec)
                f = f.mul(a)
            u = u_ell(f, ell)
            tm = b.t_power(m, prec)
            prod = u.mul(tm)
            if prod.trunc >= 1 + self.SLACK:
                break
            prec *= 2
        else:
            raise ContractError("could not reach a sufficient truncation budget")
        red = mw_reduce(prod.to_rational(), b)
        if not red.ok:
            raise ContractError(
                f"reduction stalled at order {red.stall_order} for image "
                f"({i},{j},{k}); the module is not closed here")
        if not red.integral():
            raise ContractError(
                f"image ({i},{j},{k}) has non-integer coefficients; "
                "the integral closure claim failed")
        terms = {}
        for kk, p in enumerate(red.polys):
            for e, c in p.items():
                if c:
                    terms[(e - m, kk)] = terms.get((e - m, kk), 0) + c.numerator
        return ModuleElement(ZZ, terms)


def u_step(table: UImageTable, me: ModuleElement, with_A: bool) -> ModuleElement:
    """One operator application by linearity over the cached images,
    staying in the element's coefficient ring."""
    modulus = me.ring.modulus if me.ring.kind == "Zmod" else None
    acc: dict = {}
    for (j, k), c in sorted(me.terms.items()):
        table.image(1 if with_A else 0, j, k).scaled_into(int(c), acc, modulus)
    return ModuleElement(me.ring, acc)


_TABLES = {}


def u_image(i: int, j: int, k: int, b: AlgebraBasis, A: EtaQuotient, ell: int,
            cache_dir=None) -> ModuleElement:
    """Convenience wrapper keeping one table per (basis, A, ell, cache_dir)."""
    key = (b.fingerprint(), A.level, A.exponents, ell, str(cache_dir))
    table = _TABLES.get(key)
    if table is None:
        table = _TABLES[key] = UImageTable(b, A, ell, cache_dir)
    return table.image(i, j, k)
