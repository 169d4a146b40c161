"""Search for the generator t whose zeros cancel every pole the U_ell images meet.

Given the auxiliary quotient A at level ell*N, the finite cusps of Gamma0(N)
split into four camps that dictate sign constraints on the order of t:

* p_A      -- cusps whose images under tau -> (tau+r)/ell meet a pole of A,
              closed under the pull-back induced by poles of 1/t (forcing a
              positive order wherever an already-positive cusp is reachable);
* p_g      -- cusps whose images meet the infinity class, where t and the
              basis functions themselves have poles;
* p0_prime -- leftover cusps whose images stay within the constrained camps
              (or themselves), so nonnegative order suffices;
* p1_prime -- the rest, pinned to order exactly zero (a blunt but complete
              choice).

The system W(n0) then asks for a modular exponent vector with order -n0 at
infinity, positive order on p_A and p_g, and the p0'/p1' signs; n0 climbs
from 1 until the bounded enumeration finds a solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import SearchExhaustedError, SpecError
from .eta import EtaQuotient, divisors
from .modcurve import (
    cusp_image_under_scaling,
    cusp_representatives,
    eta_order_at_cusp,
    infinity_class,
    newman_check,
    order_vector,
)
from .search import OrderConstraints, search_modular_quotients


@dataclass(frozen=True)
class PoleSets:
    p_A: frozenset
    p_g: frozenset
    p0_prime: frozenset
    p1_prime: frozenset

    def covers(self, N: int) -> bool:
        finite = set(cusp_representatives(N)) - {infinity_class(N)}
        return finite <= (self.p_A | self.p_g | self.p0_prime | self.p1_prime)


@dataclass(frozen=True)
class WSolution:
    level: int
    w: tuple  # ((divisor, exponent), ...) including zero entries
    x1: int
    x2: int
    x3: int

    def quotient(self) -> EtaQuotient:
        return EtaQuotient(self.level, dict(self.w))


def compute_pole_sets(A: EtaQuotient, ell: int, N: int) -> PoleSets:
    """Classify the finite cusps of Gamma0(N) as described in the module docstring.

    Image classes are computed from the raw fractions (a + c*r)/(c*ell), so the
    result only depends on cusp classes, never on representative choices.
    """
    if A.level != ell * N:
        raise SpecError(f"A must live at level {ell}*{N}={ell * N}, got {A.level}")
    if not newman_check(A)[0]:
        raise SpecError("A fails the modularity conditions")

    inf_N = infinity_class(N)
    finite = [x for x in cusp_representatives(N) if x != inf_N]

    a_poles = frozenset(order_vector(A).poles())
    images_fine = {x: {cusp_image_under_scaling(x, r, ell, ell * N) for r in range(ell)}
                   for x in finite}
    images_coarse = {x: {cusp_image_under_scaling(x, r, ell, N) for r in range(ell)}
                     for x in finite}

    p_a = {x for x in finite if images_fine[x] & a_poles}
    p_g = {x for x in finite if inf_N in images_coarse[x]}

    # 1/t has a pole wherever t is forced positive; cusps whose images reach
    # the forced set inherit the requirement, so close under that pull-back.
    forced = set(p_a) | set(p_g)
    while True:
        new = {x for x in finite
               if x not in forced and images_coarse[x] & forced}
        if not new:
            break
        forced |= new
    p_a |= forced - p_g

    rest = [x for x in finite if x not in p_a and x not in p_g]
    p0 = {x for x in rest if images_coarse[x] <= (p_a | p_g | {x})}
    p1 = set(rest) - p0
    return PoleSets(frozenset(p_a), frozenset(p_g), frozenset(p0), frozenset(p1))


def solve_W(N: int, pole_sets: PoleSets, n0: int, bound: int = 12):
    """Lexicographically smallest exponent vector solving W(n0), or None.

    The witnesses: x1 = n0 = -order at infinity, x2 balances the inverse
    weighted sum against 24, x3 is the integer square root of prod d**|w_d|.
    """
    constraints = OrderConstraints(
        N,
        positive=sorted(pole_sets.p_A | pole_sets.p_g),
        nonneg=sorted(pole_sets.p0_prime),
        zero=sorted(pole_sets.p1_prime),
    )
    hits = search_modular_quotients(N, n0, bound, constraints, limit=1)
    if not hits:
        return None
    eq = hits[0]
    divs = divisors(N)
    w = tuple((d, eq.exponent(d)) for d in divs)
    x2 = -eq.sum_ndr() // 24
    prod = 1
    for d, r in eq.exponents:
        prod *= d ** abs(r)
    return WSolution(N, w, n0, x2, isqrt(prod))


def verify_W(sol: WSolution, pole_sets: PoleSets) -> bool:
    """Re-check every condition of W(x1) through the order formulas."""
    eq = sol.quotient()
    ok, k0 = newman_check(eq)
    if not ok:
        return False
    if eta_order_at_cusp(eq, infinity_class(sol.level)) != -sol.x1:
        return False
    if eq.sum_ndr() + 24 * sol.x2 != 0:
        return False
    prod = 1
    for d, r in eq.exponents:
        prod *= d ** abs(r)
    if sol.x3 * sol.x3 != prod:
        return False
    for x in pole_sets.p_A | pole_sets.p_g:
        if eta_order_at_cusp(eq, x) <= 0:
            return False
    for x in pole_sets.p0_prime:
        if eta_order_at_cusp(eq, x) < 0:
            return False
    for x in pole_sets.p1_prime:
        if eta_order_at_cusp(eq, x) != 0:
            return False
    return True


def find_t(family, bound: int = 12, n0_max: int = 12) -> EtaQuotient:
    """Generator t for a congruence family: the first n0 >= 1 whose W(n0)
    admits a solution wins, so -ord(t) at infinity is minimal within bounds.
    """
    gen = getattr(family, "gen", family)
    from .ujump import build_A  # local import keeps the module graph acyclic

    A = build_A(gen)
    N = gen.ell * gen.M
    pole_sets = compute_pole_sets(A, gen.ell, N)
    for n0 in range(1, n0_max + 1):
        sol = solve_W(N, pole_sets, n0, bound)
        if sol is not None:
            return sol.quotient()
    raise SearchExhaustedError(
        f"no generator with -ord(infinity) <= {n0_max} and exponents within "
        f"{bound}; enlarge the bounds or the level")
