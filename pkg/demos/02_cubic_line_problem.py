#!/usr/bin/env python3
"""Which q have, for every beta != 0 and generator gamma of F_{q^3},
some a in F_q with beta*(gamma + a) primitive?

Three independent deciders agree on the small cases; the witnesses
behind the failures are re-checked from scratch.
"""

import time

from primline import field as fld
from primline.arith import prime_powers_between
from primline.field import field_for_q
from primline.search import brute_force_line, check_line_alg1, check_line_alg2, verify_witness

print(" q   brute  outer-gamma  inverse-class")
for q in (2, 3, 4, 5, 7, 8, 9):
    ctx = field_for_q(q, 3)
    row = [brute_force_line(ctx).status, check_line_alg1(ctx).status, check_line_alg2(ctx).status]
    print(f"{q:2d}   " + "  ".join(f"{s:>10}" for s in row))

# The inverse-class decider is fast enough to sweep every q up to 50.
failures = []
t0 = time.perf_counter()
for _, _, q in prime_powers_between(2, 50):
    ctx = field_for_q(q, 3)
    v = check_line_alg2(ctx)
    if v.status == "nonmember":
        assert verify_witness(ctx, v.witness)
        failures.append(q)
print(f"\nq <= 50 failing the cubic line problem: {failures}  ({time.perf_counter() - t0:.1f}s)")

ctx = field_for_q(5, 3)
w = check_line_alg2(ctx).witness
print(f"\nA bad pair for q=5: beta=omega^{w.beta}, gamma=omega^{w.gamma}")
for a in w.failing_a:
    x = fld.mul(ctx, w.beta, fld.add(ctx, w.gamma, a))
    print(f"  a={'0' if a == -1 else f'omega^{a}':>9}: beta(gamma+a) = omega^{x}, primitive={fld.is_primitive(ctx, x)}")
