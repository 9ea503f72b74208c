#!/usr/bin/env python3
"""Log-indexed arithmetic in F_27 = F_3^3.

Every nonzero element is stored as k, meaning omega**k for a fixed
primitive root omega.  Multiplication adds indices; addition goes through
the Zech table zech[k] = log(1 + omega**k).
"""

from primline import field as fld
from primline.field import ZERO

ctx = fld.build_field(3, 1, 3)
print(f"F_{ctx.order}: modulus (low degree first) {ctx.modulus}")
print(f"q^n - 1 = {ctx.N}, tau = {ctx.tau}, R = rad(q^n - 1) = {ctx.R}")

# The first few powers of omega, as coordinates in the basis omega^2, omega, 1
for k in range(6):
    print(f"omega^{k:<2} = {fld.to_affine(ctx, k)}")

x, y = 5, 17
print(f"\nomega^{x} * omega^{y} = omega^{fld.mul(ctx, x, y)}")
print(f"omega^{x} + omega^{y} = omega^{fld.add(ctx, x, y)}")
print("x + (-x) is zero:", fld.add(ctx, x, fld.neg(ctx, x)) == ZERO)

# The base field F_3 sits inside as {0} and the multiples of tau.
print("\nF_3 inside F_27 (as logs):", ctx.fq_elements())

# Primitivity is a gcd test on the index; generation over F_q is about
# not falling into a proper subfield.
for k in (1, 2, 13, 7):
    print(f"omega^{k}: primitive={fld.is_primitive(ctx, k)}, generates={fld.generates(ctx, k)}")
