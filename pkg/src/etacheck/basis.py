"""Algebra bases for modular functions with a single pole at infinity.

A basis consists of a generator t of pole order v+1 at infinity and functions
g_1..g_v (with g_0 = 1) whose pole orders are strictly increasing and cover
the nonzero residue classes mod v+1.  Any function of the module then reduces
greedily: the pole order of the running remainder picks the unique basis
element with a matching residue class, one monomial g_k * t**e kills the
leading term, and the pole order strictly drops.    A remainder of order zero
is a constant, which ends the reduction; an order that no basis element can
reach disproves membership.

Reduction arithmetic is exact rational.  Callers that expect integer results
(the U-operator image tables do) assert integrality afterwards; a silent
rational answer would poison everything built on top.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractError, SearchExhaustedError, SpecError
from .eta import EtaQuotient, eta_expand_normalized
from .modcurve import (
    cusp_representatives,
    eta_order_at_cusp,
    infinity_class,
    newman_check,
)
from .series import QSeries, QQ, ZZ


@dataclass(frozen=True)
class BasisFunction:
    """A named integer-linear combination of products of eta quotients,
    together with its pole order at infinity (ord_inf < 0 for true poles,
    0 only for the constant)."""

    name: str
    construction: tuple  # ((coefficient, (EtaQuotient, ...)), ...)
    ord_inf: int

    @classmethod
    def from_quotient(cls, name: str, eq: EtaQuotient, ord_inf: int) -> "BasisFunction":
        return cls(name, ((1, (eq,)),), ord_inf)

    def constituent_quotients(self) -> tuple:
        seen = []
        for _, factors in self.construction:
            for f in factors:
                if f not in seen:
                    seen.append(f)
        return tuple(seen)

    def series(self, trunc: int) -> QSeries:
        """Exact-integer expansion covering trunc coefficients past ord_inf."""
        out = None
        for coef, factors in self.construction:
            term = None
            for f in factors:
                s = eta_expand_normalized(f, trunc + self.span(factors))
                term = s if term is None else term.mul(s)
            if term is None:
                term = QSeries.one(ZZ, trunc)
            term = term.scale(coef)
            out = term if out is None else out.add(term)
        out = out.truncate(min(out.trunc, self.ord_inf + trunc))
        if out.is_zero() or out.val != self.ord_inf:
            raise ContractError(
                f"{self.name}: expansion valuation {out.val if not out.is_zero() else None} "
                f"does not match declared order {self.ord_inf}")
        return out

    @staticmethod
    def span(factors) -> int:
        # extra precision soaked up by valuation shifts inside one product
        return sum(abs(f.sum_dr()) // 24 + 1 for f in factors)

    def describe(self) -> str:
        parts = []
        for coef, factors in self.construction:
            body = "*".join(repr(f) for f in factors) if factors else "1"
            parts.append(f"{coef}*{body}")
        return f"{self.name} = " + " + ".join(parts)


@dataclass
class AlgebraBasis:
    """Generator t plus g_1..g_v; immutable once built, expansion caches grow
    monotonically and are shared by every reduction at this level."""

    level: int
    t: BasisFunction
    gs: tuple

    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False, compare=False)

    @property
    def v(self) -> int:
        return len(self.gs)

    def t_quotient(self) -> EtaQuotient:
        (coef, factors), = self.t.construction
        if coef != 1 or len(factors) != 1:
            raise SpecError("the generator t must be a single eta quotient")
        return factors[0]

    def residue_index(self, rho: int) -> int:
        """Index k (1..v) of the basis function with |ord_inf| == rho mod (v+1);
        rho == 0 belongs to t itself (index 0)."""
        v1 = self.v + 1
        if rho % v1 == 0:
            return 0
        for k, g in enumerate(self.gs, start=1):
            if (-g.ord_inf) % v1 == rho % v1:
                return k
        raise ContractError(f"no basis element covers residue {rho} mod {v1}")

    def fingerprint(self) -> str:
        blob = repr((self.level, self.t.construction, self.t.ord_inf,
                     tuple((g.construction, g.ord_inf) for g in self.gs)))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    # -- shared expansion workspace -----------------------------------------
    #
    # All cached series carry the same relative precision `prec` (number of
    # coefficients past their leading term).  Products and inverses preserve
    # relative precision, so a monomial t**e * g_k is known on the window
    # [e*ord(t) + ord(g_k), e*ord(t) + ord(g_k) + prec).

    def _grown(self, prec: int) -> dict:
        ws = self._cache
        if ws.get("prec", 0) < prec:
            ws.clear()
            ws["prec"] = prec
            ws["t"] = self.t.series(prec)
            ws["g"] = {0: QSeries.one(ZZ, prec)}
            for k, g in enumerate(self.gs, start=1):
                ws["g"][k] = g.series(prec)
            ws["tpow"] = {0: QSeries.one(ZZ, prec), 1: ws["t"]}
            ws["monomial"] = {}
            ws["monomial_q"] = {}
        return ws

    def t_power(self, e: int, prec: int) -> QSeries:
        with self._lock:
            ws = self._grown(prec)
            tp = ws["tpow"]
            if e not in tp:
                if e >= 0:
                    best = max(k for k in tp if 0 <= k <= e)
                    cur = tp[best]
                    for k in range(best + 1, e + 1):
                        cur = cur.mul(ws["t"])
                        tp[k] = cur
                else:
                    if -1 not in tp:
                        tp[-1] = ws["t"].inv()
                    best = min(k for k in tp if 0 > k >= e)
                    cur = tp[best]
                    for k in range(best - 1, e - 1, -1):
                        cur = cur.mul(tp[-1])
                        tp[k] = cur
            return tp[e]

    def monomial(self, e: int, k: int, prec: int, rational: bool = False) -> QSeries:
        """Expansion of t**e * g_k (g_0 = 1) at the workspace precision."""
        with self._lock:
            ws = self._grown(prec)
            key = (e, k)
            store = ws["monomial_q" if rational else "monomial"]
            if key not in store:
                if rational:
                    store[key] = self.monomial(e, k, prec).to_rational()
                elif k == 0:
                    store[key] = self.t_power(e, prec)
                elif e == 0:
                    store[key] = ws["g"][k]
                else:
                    store[key] = self.t_power(e, prec).mul(ws["g"][k])
            return store[key]


def verify_basis(b: AlgebraBasis) -> bool:
    """All structural conditions: t has pole order v+1 at infinity, the
    |ord_inf| are strictly increasing and fill the nonzero residues mod v+1,
    and every eta-quotient constituent is modular at the level."""
    v1 = b.v + 1
    if -b.t.ord_inf != v1:
        return False
    orders = [-g.ord_inf for g in b.gs]
    if any(o <= 0 for o in orders):
        return False
    if sorted(orders) != orders or len(set(orders)) != len(orders):
        return False
    residues = [o % v1 for o in orders]
    if 0 in residues or len(set(residues)) != len(residues):
        return False
    for fn in (b.t, *b.gs):
        for eq in fn.constituent_quotients():
            if eq.level != b.level or not newman_check(eq)[0]:
                return False
    inf = infinity_class(b.level)
    t_eq = b.t_quotient()
    if eta_order_at_cusp(t_eq, inf) != b.t.ord_inf:
        return False
    for x in cusp_representatives(b.level):
        if x != inf and eta_order_at_cusp(t_eq, x) < 0:
            return False
    return True


# -- the level-20 basis ------------------------------------------------------

_T20 = EtaQuotient(20, {1: 2, 4: 2, 10: 8, 5: -2, 20: -10})
_H20 = EtaQuotient(20, {1: -1, 4: 1, 5: 5, 20: -5})
_G20 = EtaQuotient(20, {2: -2, 4: 4, 10: 2, 20: -4})

_BASIS_N20 = None


def load_basis_n20() -> AlgebraBasis:
    """The standard level-20 basis: generator of order -5 and g_1..g_4 of
    orders (-2, -3, -4, -6) built from the two auxiliary quotients g (order
    -2) and h (order -3): g_1 = g, g_2 = h - g, g_3 = g^2, g_4 = (h - g)^2."""
    global _BASIS_N20
    if _BASIS_N20 is None:
        t = BasisFunction.from_quotient("t", _T20, -5)
        g1 = BasisFunction.from_quotient("g1", _G20, -2)
        g2 = BasisFunction("g2", ((1, (_H20,)), (-1, (_G20,))), -3)
        g3 = BasisFunction("g3", ((1, (_G20, _G20)),), -4)
        g4 = BasisFunction("g4", ((1, (_H20, _H20)), (-2, (_H20, _G20)), (1, (_G20, _G20))), -6)
        _BASIS_N20 = AlgebraBasis(20, t, (g1, g2, g3, g4))
    return _BASIS_N20


# -- membership reduction ----------------------------------------------------

@dataclass(frozen=True)
class ReductionResult:
    """Either polynomial coefficients p_0..p_v (dicts degree -> Fraction with
    sum p_k(t) g_k reproducing the input) or the pole order where the greedy
    descent stalled."""

    polys: tuple | None
    stall_order: int | None = None

    @property
    def ok(self) -> bool:
        return self.polys is not None

    def poly(self, k: int) -> dict:
        if not self.ok:
            raise SpecError("reduction failed; no polynomials to report")
        return dict(self.polys[k])

    def integral(self) -> bool:
        return self.ok and all(c.denominator == 1
                               for p in self.polys for c in p.values())


def mw_reduce(f: QSeries, b: AlgebraBasis) -> ReductionResult:
    """Greedy principal-part reduction of f against the basis.

    f must carry at least the principal part and constant (truncation >= 1);
    whatever tail is available beyond that is consumed as a corruption check,
    because after a successful reduction the residual must vanish identically.
    """
    if f.ring.kind == "Z":
        f = f.to_rational()
    if f.ring.kind != "Q":
        raise SpecError("reduction works over exact rationals")
    f = f.normalize_offset()
    if f.trunc < 1:
        raise SpecError("insufficient truncation: need the constant term in view")
    v1 = b.v + 1
    orders = {k: -g.ord_inf for k, g in enumerate(b.gs, start=1)}
    # monomials matching a pole of order m are known to f.trunc when the
    # workspace holds this much relative precision
    prec = f.trunc + max(0, -f.val)
    polys = [dict() for _ in range(b.v + 1)]
    fk = f
    prev_m = None
    while True:
        m = -fk.val if (not fk.is_zero() and fk.val < 0) else 0
        if prev_m is not None and m >= prev_m:
            raise ContractError("reduction failed to descend strictly")
        prev_m = m
        if m == 0:
            c0 = fk.coeff(0) if fk.trunc > 0 else Fraction(0)
            if c0:
                polys[0][0] = polys[0].get(0, Fraction(0)) + c0
            residual = fk.sub(QSeries.const(QQ, c0, fk.trunc))
            if not residual.is_zero():
                raise ContractError(
                    "nonzero residual after reduction: the input is not in the "
                    "module to its stated truncation (or was under-truncated)")
            return ReductionResult(tuple(polys))
        rho = m % v1
        k = b.residue_index(rho)
        n_k = orders[k] if k else 0
        if k and n_k > m:
            return ReductionResult(None, stall_order=m)
        e = (m - n_k) // v1
        s = b.monomial(e, k, prec, rational=True)
        alpha = fk.coeffs[0] / s.coeffs[0]
        fk = fk.sub(s.truncate(min(s.trunc, fk.trunc)).scale(alpha))
        polys[k][e] = polys[k].get(e, Fraction(0)) + alpha


def reduction_series(result: ReductionResult, b: AlgebraBasis, trunc: int) -> QSeries:
    """Re-expand sum p_k(t) g_k as a rational series, for reconstruction checks."""
    v1 = b.v + 1
    deepest = 0
    for k, p in enumerate(result.polys):
        n_k = -b.gs[k - 1].ord_inf if k else 0
        for e in p:
            deepest = max(deepest, e * v1 + n_k)
    prec = trunc + deepest
    out = QSeries.zero(QQ, trunc)
    for k, p in enumerate(result.polys):
        for e, c in p.items():
            if c:
                s = b.monomial(e, k, prec, rational=True)
                out = out.add(s.truncate(min(s.trunc, trunc)).scale(c))
    return out


# -- basis construction from a generator -------------------------------------

def construct_basis(t_eq: EtaQuotient, N: int, exp_bound: int = 16) -> AlgebraBasis:
    """Build a basis for the given generator by bounded enumeration.

    Searches eta quotients with a pole only at infinity for each pole order
    1, 2, ... and keeps the first hit per nonzero residue class mod v+1;
    residues still missing afterwards are attempted as products of two hits.
    """
    if t_eq.level != N:
        raise SpecError("generator level mismatch")
    if not newman_check(t_eq)[0]:
        raise SpecError("generator fails the modularity conditions")
    inf = infinity_class(N)
    ord_t = eta_order_at_cusp(t_eq, inf)
    if ord_t.denominator != 1 or ord_t >= 0:
        raise SpecError("generator must have a pole at infinity")
    for x in cusp_representatives(N):
        if x != inf and eta_order_at_cusp(t_eq, x) < 0:
            raise SpecError(f"generator has a pole at the finite cusp {x}")
    v1 = -int(ord_t)
    v = v1 - 1
    t = BasisFunction.from_quotient("t", t_eq, -v1)
    if v == 0:
        return AlgebraBasis(N, t, ())

    from .search import OrderConstraints, search_modular_quotients
    nonneg = [x for x in cusp_representatives(N) if x != inf]
    constraints = OrderConstraints(N, nonneg=nonneg)

    needed = set(range(1, v1))
    hits = {}  # residue -> (pole_order, construction tuple)
    for n0 in range(1, 2 * v1 + 3):
        rho = n0 % v1
        if rho not in needed or rho in hits:
            continue
        found = search_modular_quotients(N, n0, exp_bound, constraints, limit=1)
        if found:
            hits[rho] = (n0, ((1, (found[0],)),))
        if len(hits) == len(needed):
            break
    if len(hits) < len(needed):
        # close under products of two found quotients
        pool = sorted(hits.values())
        for rho in sorted(needed - set(hits)):
            best = None
            for o1, c1 in pool:
                for o2, c2 in pool:
                    if (o1 + o2) % v1 == rho and (best is None or o1 + o2 < best[0]):
                        (_, (q1,)), = c1
                        (_, (q2,)), = c2
                        best = (o1 + o2, ((1, (q1, q2)),))
            if best is not None:
                hits[rho] = best
    if len(hits) < len(needed):
        raise SearchExhaustedError(
            f"could not cover residues {sorted(needed - set(hits))} mod {v1} "
            f"within exponent bound {exp_bound}")
    gs = tuple(
        BasisFunction(f"g{i}", construction, -order)
        for i, (order, construction) in enumerate(sorted(hits.values()), start=1))
    b = AlgebraBasis(N, t, gs)
    if not verify_basis(b):
        raise ContractError("constructed basis fails its own structural conditions")
    return b
