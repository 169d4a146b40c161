#!/usr/bin/env python3
"""The level-20 algebra basis and greedy membership reduction.

Functions with a single pole (at infinity) reduce against the basis by
repeatedly killing the leading term of the principal part: the pole order
mod 5 selects the unique basis element that can reach it, and the order
strictly drops.  A constant remainder proves membership and yields the
polynomial coefficients; an unreachable order disproves it.
"""

from fractions import Fraction

from etacheck import QQ, QSeries, load_basis_n20, mw_reduce, reduction_series

b = load_basis_n20()
print(f"basis at level {b.level}: generator of order {b.t.ord_inf}, v = {b.v}")
for fn in (b.t, *b.gs):
    print(f"  {fn.describe()}   [ord_inf {fn.ord_inf}]")
orders = [-g.ord_inf for g in b.gs]
print(f"pole orders {orders} cover residues {[o % 5 for o in orders]} mod 5,")
print("with multiples of 5 handled by powers of t: every pole order except 1")
print("is reachable, and order 1 is exactly the gap of the underlying curve.")

print()
print("reduce f = 3*t*g1 - 7*g3 + 5 (built from its expansion alone):")
f = (b.monomial(1, 1, 60).to_rational().scale(3)
     .add(b.monomial(0, 3, 60).to_rational().scale(-7))
     .add(QSeries.const(QQ, 5, 35)))
res = mw_reduce(f, b)
for k in range(b.v + 1):
    poly = res.poly(k)
    if poly:
        name = "1" if k == 0 else f"g{k}"
        body = " + ".join(f"{c}*t^{e}" for e, c in sorted(poly.items()))
        print(f"  coefficient of {name}: {body}")
print("  reconstruction matches the input:",
      reduction_series(res, b, f.trunc).agrees_with(f))

print()
print("a simple pole at infinity stalls the reduction immediately:")
bad = QSeries(QQ, [Fraction(1)], -1, 20)
res = mw_reduce(bad, b)
print(f"  member: {res.ok}; stalled at pole order {res.stall_order}")
