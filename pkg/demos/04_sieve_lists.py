#!/usr/bin/env python3
"""The sieve in exact rationals: eliminating q without searching.

A partition of the primes of q^n - 1 gives a threshold; q passes when it
exceeds it.  Every comparison is exact.
"""

from primline.fixtures import load_fixture
from primline.sieve import best_partition, cubic_pipeline, lemma1_rhs, quartic_cutoff, quartic_scan

for q in (809, 1951, 5791, 4096, 103, 9811):
    part = best_partition(q, 3)
    if part is None:
        print(f"q={q}: no partition with t <= 4, r <= 6 works")
    else:
        print(f"q={q}: k={part.k} (t={part.t}), s={part.s}, r={part.r}, threshold {float(lemma1_rhs(part)):.1f}")

# The refined cubic criteria shrink the 146 survivors to 82.
list146 = load_fixture("cubic_146")
survivors = cubic_pipeline(list146)
print(f"\ncubic: {len(list146)} candidates -> {len(survivors)} survivors, largest {max(survivors)}")
print("matches the shipped list:", survivors == set(load_fixture("cubic_82")))

# Quartic: any q past the cutoff passes for some partition, so only
# q <= B needs factoring.  Scanning a prefix keeps this demo quick.
B = quartic_cutoff(14)
scan = quartic_scan(limit=20000)
e4 = load_fixture("e4")
print(f"\nquartic cutoff B = {B}")
print(f"q <= 20000: {scan.scanned} prime powers, {len(scan.first_pass)} survive r=0, {len(scan.survivors)} survive all")
print("agrees with the shipped E_4 below 20000:", scan.survivors == {q for q in e4 if q <= 20000})
