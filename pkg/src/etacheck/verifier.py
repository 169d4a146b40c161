"""Drive the ell-adic iteration and cross-check it against brute force.

Starting from L_0 = 1, alternate the two operator flavours (with the
auxiliary quotient A on even steps, without on odd ones), reduce every
coefficient mod ell**B, and record after each step the largest power of ell
dividing all coefficients.  A conjectured congruence family translates into
a required minimum for those valuations; the report carries the whole
valuation sequence either way.

The direct oracle expands the generating function far enough to test the
claimed divisibilities coefficient by coefficient, which is exactly the
computation the iteration exists to avoid, and therefore exactly the right
independent check at small scale.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

from .basis import AlgebraBasis
from .errors import ContractError, SpecError
from .series import QSeries, ZZ, zmod
from .ujump import (
    FamilyGenerator,
    ModuleElement,
    UImageTable,
    build_A,
    module_element_series,
    u_step,
)

PATTERN_KINDS = ("even-alpha", "every-alpha")


@dataclass(frozen=True)
class CongruenceFamilySpec:
    """A congruence family to check: the generating data, the cap exponent B,
    the progression constant c (the residues are the inverses of c mod
    ell**alpha), and which valuation pattern is claimed:

    * "even-alpha":  v_{2a} >= a   (full powers arrive every other step)
    * "every-alpha": v_a   >= a
    """

    name: str
    gen: FamilyGenerator
    c: int
    pattern: str
    B: int = 5

    def __post_init__(self):
        if self.pattern not in PATTERN_KINDS:
            raise SpecError(f"unknown pattern kind {self.pattern!r}")
        if self.B < 1:
            raise SpecError("B must be >= 1")
        if gcd(self.c, self.gen.ell) != 1:
            raise SpecError("the progression constant must be coprime to ell")

    @property
    def level(self) -> int:
        return self.gen.ell * self.gen.M

    @property
    def default_iterations(self) -> int:
        return 2 * self.B if self.pattern == "even-alpha" else self.B

    def required_valuation(self, alpha: int):
        """Minimum v_alpha the pattern demands, or None if unconstrained."""
        if self.pattern == "every-alpha":
            return alpha
        return alpha // 2 if alpha % 2 == 0 else None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "M": self.gen.M,
            "r": {str(d): e for d, e in self.gen.r},
            "ell": self.gen.ell,
            "c": self.c,
            "pattern": self.pattern,
            "B": self.B,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CongruenceFamilySpec":
        try:
            gen = FamilyGenerator(int(data["M"]),
                                  {int(d): int(e) for d, e in data["r"].items()},
                                  int(data["ell"]))
            return cls(str(data.get("name", "custom")), gen, int(data["c"]),
                       str(data["pattern"]), int(data.get("B", 5)))
        except KeyError as exc:
            raise SpecError(f"family spec is missing field {exc}") from exc


def rogers_ramanujan(B: int = 5) -> CongruenceFamilySpec:
    """Rogers-Ramanujan subpartition counts: a(n) == 0 mod 5**a whenever
    24n == 1 mod 5**(2a); full powers arrive on even steps only."""
    return CongruenceFamilySpec(
        "rogers-ramanujan", FamilyGenerator(4, {1: -3, 2: 5, 4: -2}, 5), 24,
        "even-alpha", B)


def andrews_sellers(B: int = 5) -> CongruenceFamilySpec:
    """2-colored Frobenius partitions: cphi2(n) == 0 mod 5**a whenever
    12n == 1 mod 5**a; every step gains a full power."""
    return CongruenceFamilySpec(
        "andrews-sellers", FamilyGenerator(4, {1: -4, 2: 5, 4: -2}, 5), 12,
        "every-alpha", B)


_BUILTINS = {"rogers-ramanujan": rogers_ramanujan, "andrews-sellers": andrews_sellers}


def builtin_spec(name: str, B: int | None = None) -> CongruenceFamilySpec:
    if name not in _BUILTINS:
        raise SpecError(f"unknown built-in family {name!r}; "
                        f"choices: {', '.join(sorted(_BUILTINS))}")
    return _BUILTINS[name](B) if B is not None else _BUILTINS[name]()


@dataclass
class VerificationReport:
    spec_name: str
    ell: int
    B: int
    iterations: int
    V: list = field(default_factory=list)
    saturated: list = field(default_factory=list)
    required: list = field(default_factory=list)
    passed: list = field(default_factory=list)
    support: list = field(default_factory=list)   # per alpha: {terms, j_min, j_max}
    seconds: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(p for p in self.passed if p is not None)

    def first_failure(self):
        for alpha, p in enumerate(self.passed):
            if p is False:
                return alpha
        return None

    def to_json(self, include_timings: bool = True) -> dict:
        out = {
            "family": self.spec_name,
            "ell": self.ell,
            "B": self.B,
            "iterations": self.iterations,
            "V": list(self.V),
            "saturated": list(self.saturated),
            "required": list(self.required),
            "passed": list(self.passed),
            "support": list(self.support),
            "ok": self.ok,
        }
        if include_timings:
            out["seconds"] = [round(s, 3) for s in self.seconds]
        return out

    def text(self) -> str:
        lines = [f"family {self.spec_name}: ell={self.ell} B={self.B} "
                 f"iterations={self.iterations}"]
        for alpha, v in enumerate(self.V):
            req = self.required[alpha]
            verdict = ("  " if req is None
                       else ("ok" if self.passed[alpha] else "FAIL"))
            sat = " (saturated)" if self.saturated[alpha] else ""
            need = "" if req is None else f" need>={req}"
            lines.append(f"  alpha={alpha:2d}  v={v}{sat}{need}  {verdict}")
        lines.append("VERIFIED" if self.ok else "CONJECTURE FAILS")
        return "\n".join(lines)


def iterate(spec: CongruenceFamilySpec, b: AlgebraBasis, iterations: int | None = None,
            *, B: int | None = None, table: UImageTable | None = None,
            cache_dir=None, threads: int = 1, j_ceiling: int = 64) -> VerificationReport:
    """Run the iteration for the given number of steps and collect valuations.

    Even steps apply U_ell(A * -), odd steps plain U_ell; coefficients live in
    Z/ell**B throughout.  Images come from the (possibly disk-backed) table;
    a j-support escape beyond +-j_ceiling aborts loudly rather than truncate.
    """
    B = spec.B if B is None else B
    if B < 1:
        raise SpecError("B must be >= 1")
    iterations = spec.default_iterations if iterations is None else iterations
    ell = spec.gen.ell
    if table is None:
        table = UImageTable(b, build_A(spec.gen), ell, cache_dir)
    report = VerificationReport(spec.name, ell, B, iterations)

    current = ModuleElement(zmod(ell, B), {(0, 0): 1})
    report.V.append(0)
    report.saturated.append(False)
    report.required.append(spec.required_valuation(0))
    report.passed.append(None if report.required[0] is None else 0 >= report.required[0])
    report.support.append(_support_stats(current))
    report.seconds.append(0.0)

    for alpha in range(iterations):
        t0 = time.monotonic()
        with_A = alpha % 2 == 0
        if threads > 1:
            table.warm(((1 if with_A else 0, j, k) for (j, k) in current.terms), threads)
        nxt = u_step(table, current, with_A=with_A)
        j_lo, j_hi = nxt.j_range()
        if j_lo < -j_ceiling or j_hi > j_ceiling:
            raise ContractError(
                f"t-support [{j_lo}, {j_hi}] escaped the +-{j_ceiling} ceiling "
                f"at step {alpha + 1}; the basis is not taming this family")
        v = nxt.min_ell_valuation(ell, B)
        req = spec.required_valuation(alpha + 1)
        report.V.append(v)
        report.saturated.append(nxt.is_zero())
        report.required.append(req)
        report.passed.append(None if req is None else v >= req)
        report.support.append(_support_stats(nxt))
        report.seconds.append(time.monotonic() - t0)
        current = nxt
    return report


def _support_stats(me: ModuleElement) -> dict:
    j_lo, j_hi = me.j_range()
    return {"terms": len(me.terms), "j_min": j_lo, "j_max": j_hi}


def check_pattern(report: VerificationReport, spec: CongruenceFamilySpec) -> bool:
    """Compare the report's valuations against the claimed pattern."""
    for alpha, v in enumerate(report.V):
        req = spec.required_valuation(alpha)
        if req is not None and v < req:
            return False
    return True


def residue_for_case(c: int, ell: int, alpha: int) -> int:
    """The unique residue lam in [0, ell**alpha) with c*lam == 1."""
    modulus = ell ** alpha
    if gcd(c, modulus) != 1:
        raise SpecError(f"{c} is not invertible mod {ell}^{alpha}")
    return pow(c, -1, modulus) if modulus > 1 else 0


@dataclass(frozen=True)
class OracleResult:
    ok: bool
    counterexample: int | None = None  # smallest failing n

    def __bool__(self):
        return self.ok


def direct_oracle(gen: FamilyGenerator, m: int, j: int, ell: int, e: int,
                  n_max: int) -> OracleResult:
    """Test ell**e | a(m*n + j) for 0 <= n <= n_max by raw expansion."""
    coeffs = gen.coefficients(m * n_max + j + 1)
    mod = ell ** e
    for n in range(n_max + 1):
        if coeffs[m * n + j] % mod:
            return OracleResult(False, n)
    return OracleResult(True)


# -- translating module elements back into combinatorial claims --------------

def congruence_subseries(gen: FamilyGenerator, alpha: int, c: int, count: int) -> QSeries:
    """sum of a(n) q**floor(n / ell**alpha) over n with c*n == 1 mod ell**alpha,
    the raw progression slice of the generating function."""
    if alpha == 0:
        return gen.series(count)
    mod = gen.ell ** alpha
    lam = residue_for_case(c, gen.ell, alpha)
    coeffs = gen.coefficients(mod * count + lam + 1)
    terms = {s: coeffs[mod * s + lam] for s in range(count)}
    return QSeries.from_terms(ZZ, terms, count)


def scaled_congruence_series(spec: CongruenceFamilySpec, alpha: int, count: int) -> QSeries:
    """The step-alpha function as an honest q-series over Z: the progression
    slice times the bookkeeping prefactor (q / G(q**ell) on odd steps,
    q / G(q) on even steps)."""
    gen = spec.gen
    if alpha == 0:
        return QSeries.one(ZZ, count)
    sub = congruence_subseries(gen, alpha, spec.c, count + 2)
    inner = count + 2
    if alpha % 2:
        phi = gen.series(inner).substitute_power(gen.ell).inv().shift(1)
    else:
        phi = gen.series(inner).inv().shift(1)
    out = phi.mul(sub)
    return out.truncate(min(out.trunc, count))


def consistency_check(spec: CongruenceFamilySpec, b: AlgebraBasis, alpha: int,
                      count: int, *, B: int | None = None,
                      table: UImageTable | None = None) -> bool:
    """Does the basis-side iterate match the direct construction mod ell**B
    on the first `count` coefficients?"""
    B = spec.B if B is None else B
    ell = spec.gen.ell
    if table is None:
        table = UImageTable(b, build_A(spec.gen), ell)
    current = ModuleElement(zmod(ell, B), {(0, 0): 1})
    for step in range(alpha):
        current = u_step(table, current, with_A=(step % 2 == 0))
    basis_side = module_element_series(current, b, count)
    direct_side = scaled_congruence_series(spec, alpha, count).reduce_mod(ell, B)
    return basis_side.agrees_with(direct_side)
