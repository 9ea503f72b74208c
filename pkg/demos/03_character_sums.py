#!/usr/bin/env python3
"""Character sums over a translate gamma + F_q.

All q^n - 1 sums for one gamma come from a single FFT of the histogram of
log(gamma + a).  We compare the largest of them against the two bounds
the sieve relies on.
"""

import math

import numpy as np

from primline.charsum import (
    all_char_sums,
    coset_representatives,
    tu_decomposition,
    verify_cubic_bound,
    verify_katz,
)
from primline import field as fld
from primline.field import field_for_q

print(" q  n  max|S|/((n-1)sqrt q)  max|S|/(sqrt q + 1) [order | q^2+q+1]")
for q, n in [(3, 3), (4, 3), (5, 3), (7, 3), (8, 3), (9, 3), (2, 4), (3, 4)]:
    ctx = field_for_q(q, n)
    katz = verify_katz(ctx)
    sharp = f"{verify_cubic_bound(ctx).max_ratio:.4f}" if n == 3 else "   -"
    print(f"{q:2d} {n:2d}  {katz.max_ratio:18.4f}  {sharp:>12}")

# One spectrum in detail.
ctx = field_for_q(7, 3)
reps = coset_representatives(ctx)
gamma = int(reps[fld.generates_mask(ctx, reps)][0])
S = all_char_sums(ctx, gamma)
print(f"\nq=7, gamma=omega^{gamma}: S(principal) = {S[0].real:.0f}")
print(f"  largest nonprincipal |S| = {np.abs(S[1:]).max():.4f}, bound 2 sqrt 7 = {2 * math.sqrt(7):.4f}")

# The set structure behind the sharper cubic bound.
for q in (3, 4, 5, 7):
    ctx = field_for_q(q, 3)
    tu = tu_decomposition(ctx, 1)
    print(f"q={q}: |T|={tu.T_distinct}  |U|={tu.U_size}  |U1|={tu.U1_size}  U = U1 + U1^-1: {tu.u_is_union}")
