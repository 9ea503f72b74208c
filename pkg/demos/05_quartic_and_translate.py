#!/usr/bin/env python3
"""Quartic extensions: the line problem and the weaker translate problem.

The translate problem fixes beta = 1, so every translate failure is also a
line failure.  Several q fail the line problem but still pass translates.
"""

import time

from primline.field import field_for_q
from primline.fixtures import load_fixture
from primline.search import check_line_quartic, check_translate, verify_witness

g_l, g_t = set(load_fixture("g_l")), set(load_fixture("g_t"))
print(" q   line        translate   (shipped: in G_L, in G_T)")
for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 27, 37):
    ctx = field_for_q(q, 4)
    t0 = time.perf_counter()
    line = check_line_quartic(ctx) if q <= 16 else None
    tr = check_translate(ctx)
    if tr.witness is not None:
        assert verify_witness(ctx, tr.witness, "translate")
        assert verify_witness(ctx, tr.witness, "line")
    line_s = line.status if line else "(skipped)"
    print(f"{q:2d}   {line_s:<11} {tr.status:<11} ({q in g_l}, {q in g_t})  {time.perf_counter() - t0:.2f}s")
