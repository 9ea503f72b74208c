"""Sieve criteria for membership of q in L_n, evaluated in exact rationals.

A partition splits the distinct primes of q^n - 1 into core primes (their
product is k), sieving primes p_i and specially treated primes l_j.  The
basic criterion works for any n; the refined cubic criteria (k = 2 and
k = 6) exploit the sharper bound for characters of order dividing
q^2 + q + 1.  Every comparison against sqrt(q) is made by sign-aware
squaring, never in floating point.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal

from .arith import factorize, factorize_product, prime_powers_between, primes_below

log = logging.getLogger(__name__)

__all__ = [
    "SievePartition",
    "LemCData",
    "make_partition",
    "partition_shapes",
    "lemma1_rhs",
    "lemma1_criterion",
    "best_partition",
    "lemc_data",
    "lemc_criterion",
    "cubic_pipeline",
    "quartic_cutoff",
    "quartic_cutoff_grid",
    "QuarticScan",
    "quartic_scan",
    "quartic_pipeline",
]

Variant = Literal["k2", "k6"]


@dataclass(frozen=True)
class SievePartition:
    q: int
    n: int
    core_primes: tuple[int, ...]
    sieving_primes: tuple[int, ...]
    special_primes: tuple[int, ...]

    @property
    def k(self) -> int:
        return math.prod(self.core_primes)

    @property
    def t(self) -> int:
        return len(self.core_primes)

    @property
    def s(self) -> int:
        return len(self.sieving_primes)

    @property
    def r(self) -> int:
        return len(self.special_primes)

    @property
    def m(self) -> Fraction:
        out = Fraction(1)
        for p in self.core_primes:
            out *= Fraction(p - 1, p)
        return out

    @property
    def delta(self) -> Fraction:
        return 1 - sum((Fraction(1, p) for p in self.sieving_primes), Fraction(0))

    @property
    def epsilon(self) -> Fraction:
        return sum((Fraction(1, l) for l in self.special_primes), Fraction(0))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "t": self.t,
            "s": self.s,
            "r": self.r,
            "core_primes": list(self.core_primes),
            "sieving_primes": list(self.sieving_primes),
            "special_primes": list(self.special_primes),
            "m": str(self.m),
            "delta": str(self.delta),
            "epsilon": str(self.epsilon),
        }


def _radical_primes(q: int, n: int) -> tuple[int, ...]:
    if n == 4:
        return factorize_product([q - 1, q + 1, q * q + 1]).primes
    if n == 3:
        return factorize_product([q - 1, q * q + q + 1]).primes
    return factorize(q**n - 1).primes


def make_partition(q, n, core, sieving, special) -> SievePartition:
    """Build a partition, checking it covers the primes of q^n - 1 exactly once."""
    part = SievePartition(q, n, tuple(sorted(core)), tuple(sorted(sieving)), tuple(sorted(special)))
    roles = part.core_primes + part.sieving_primes + part.special_primes
    if len(set(roles)) != len(roles) or set(roles) != set(_radical_primes(q, n)):
        raise ValueError(f"partition {roles} does not split the primes of {q}^{n}-1")
    return part


def partition_shapes(q: int, n: int, t_max: int, r_max: int) -> Iterator[SievePartition]:
    """Partitions in (t asc, r asc) order.

    k is the product of the t smallest primes, the l_j are the r largest
    remaining primes and everything else is sieved.
    """
    primes = _radical_primes(q, n)
    for t in range(1, min(t_max, len(primes)) + 1):
        rest = primes[t:]
        for r in range(0, min(r_max, len(rest)) + 1):
            cut = len(rest) - r
            yield SievePartition(q, n, primes[:t], rest[:cut], rest[cut:])


def lemma1_rhs(part: SievePartition) -> Fraction | None:
    """(n-1)^2 X^2, the bound q must exceed; None when m*delta <= epsilon."""
    m, delta, eps = part.m, part.delta, part.epsilon
    s, r, t = part.s, part.r, part.t
    denom = m * delta - eps
    if denom <= 0:
        return None
    X = (2**t * m * (s - 1 + 2 * delta) - m * delta + r - eps) / denom
    return (part.n - 1) ** 2 * X * X


def lemma1_criterion(part: SievePartition) -> bool:
    bound = lemma1_rhs(part)
    return bound is not None and part.q > bound


def best_partition(q: int, n: int, t_max: int = 4, r_max: int = 6) -> SievePartition | None:
    for part in partition_shapes(q, n, t_max, r_max):
        if lemma1_criterion(part):
            return part
    return None


# ---------------------------------------------------------------------------
# Refined cubic criteria.


@dataclass(frozen=True)
class LemCData:
    partition: SievePartition

    @property
    def _tau(self) -> int:
        q = self.partition.q
        return q * q + q + 1

    @property
    def nu1(self) -> Fraction:
        return sum(
            (Fraction(p - 1, p) for p in self.partition.sieving_primes if self._tau % p),
            Fraction(0),
        )

    @property
    def nu2(self) -> Fraction:
        return sum(
            (Fraction(p - 1, p) for p in self.partition.sieving_primes if self._tau % p == 0),
            Fraction(0),
        )


def lemc_data(q: int, variant: Variant, r: int) -> LemCData | None:
    """Cubic partition for the k=2 or k=6 criterion with r special primes.

    The special primes are the r largest primes of q^2+q+1 outside k.
    Returns None if q^2+q+1 has fewer than r such primes.
    """
    core = (2,) if variant == "k2" else (2, 3)
    _check_variant(q, variant)
    tau = q * q + q + 1
    rest = [p for p in _radical_primes(q, 3) if p not in core]
    candidates = [p for p in rest if tau % p == 0]
    if r > len(candidates):
        return None
    special = candidates[len(candidates) - r :] if r else []
    sieving = [p for p in rest if p not in special]
    return LemCData(SievePartition(q, 3, core, tuple(sieving), tuple(special)))


def _check_variant(q: int, variant: str) -> None:
    if variant == "k2" and q % 2 == 0:
        raise ValueError("k=2 criterion needs odd q")
    if variant == "k6" and q % 6 != 1:
        raise ValueError("k=6 criterion needs q = 1 mod 6")
    if variant not in ("k2", "k6"):
        raise ValueError(f"unknown variant {variant!r}")


def _sqrt_form_positive(a: Fraction, b: Fraction, c: Fraction, q: int) -> bool:
    """Decide a*q - b*sqrt(q) - c > 0 exactly."""
    lhs = a * q - c
    if b >= 0:
        return lhs > 0 and lhs * lhs > b * b * q
    return lhs >= 0 or lhs * lhs < b * b * q


def lemc_coefficients(data: LemCData, variant: Variant) -> tuple[Fraction, Fraction, Fraction]:
    part = data.partition
    m, delta, eps, r = part.m, part.delta, part.epsilon, part.r
    nu1, nu2 = data.nu1, data.nu2
    if variant == "k2":
        return m * delta - eps, m * (2 * delta + 4 * nu1 + 3 * nu2) + r - eps, m * nu2 + r - eps
    return (
        m * delta - eps,
        m * (5 * delta + 8 * nu1 + 6 * nu2) + r - eps,
        m * (delta + 2 * nu2) + r - eps,
    )


def lemc_criterion(data: LemCData, variant: Variant) -> bool:
    part = data.partition
    _check_variant(part.q, variant)
    want = (2,) if variant == "k2" else (2, 3)
    if part.core_primes != want:
        raise ValueError(f"{variant} criterion needs core primes {want}")
    tau = part.q**2 + part.q + 1
    if any(tau % l for l in part.special_primes):
        raise ValueError("special primes must divide q^2+q+1")
    a, b, c = lemc_coefficients(data, variant)
    return _sqrt_form_positive(a, b, c, part.q)


def lemc_eliminates(q: int, variant: Variant, r_max: int = 2) -> bool:
    for r in range(r_max + 1):
        data = lemc_data(q, variant, r)
        if data is not None and lemc_criterion(data, variant):
            return True
    return False


def cubic_pipeline(
    candidates: Iterable[int],
    r_max: int = 2,
    variants: tuple[Variant, ...] = ("k2", "k6"),
) -> set[int]:
    """Remove every q eliminated by the refined criteria.

    k=2 is tried (r = 0..r_max) on odd q, then k=6 on the survivors with
    q = 1 mod 6.
    """
    survivors = set(candidates)
    for variant in variants:
        applicable = (lambda q: q % 2 == 1) if variant == "k2" else (lambda q: q % 6 == 1)
        survivors = {q for q in survivors if not (applicable(q) and lemc_eliminates(q, variant, r_max))}
        log.info("after %s: %d survivors", variant, len(survivors))
    return survivors


# ---------------------------------------------------------------------------
# Quartic scan.


def _worst_case_bound(omega: int, t_max: int, r_max: int) -> Fraction:
    """min over shapes of the bound when q^4-1 has the omega smallest primes."""
    primes = primes_below(1000)[:omega]
    best = None
    for t in range(1, min(t_max, omega) + 1):
        rest = primes[t:]
        for r in range(0, min(r_max, len(rest)) + 1):
            cut = len(rest) - r
            part = SievePartition(0, 4, primes[:t], rest[:cut], rest[cut:])
            bound = lemma1_rhs(part)
            if bound is not None and (best is None or bound < best):
                best = bound
    if best is None:
        raise ArithmeticError(f"no admissible shape for omega={omega}")
    return best


def quartic_cutoff(max_omega: int = 14, t_max: int = 4, r_max: int = 4) -> int:
    """B such that every q > B with omega(q^4-1) <= max_omega passes.

    Replacing any prime of a shape by a larger one can only lower the
    bound, so the worst case for each omega uses the smallest primes.
    """
    worst = max(_worst_case_bound(w, t_max, r_max) for w in range(1, max_omega + 1))
    return math.floor(worst)


def quartic_cutoff_grid(max_omega: int = 14, t_max: int = 4, r_max: int = 4) -> float:
    """Floating-point recomputation of the cutoff over the same shape grid."""
    primes = primes_below(1000)[:max_omega]
    worst = 0.0
    for w in range(1, max_omega + 1):
        best = math.inf
        for t in range(1, min(t_max, w) + 1):
            m = math.prod(1 - 1 / p for p in primes[:t])
            rest = primes[t:w]
            for r in range(0, min(r_max, len(rest)) + 1):
                ps, ls = rest[: len(rest) - r], rest[len(rest) - r :]
                delta = 1 - sum(1 / p for p in ps)
                eps = sum(1 / l for l in ls)
                if m * delta - eps <= 0:
                    continue
                X = (2**t * m * (len(ps) - 1 + 2 * delta) - m * delta + r - eps) / (m * delta - eps)
                best = min(best, 9 * X * X)
        worst = max(worst, best)
    return worst


@dataclass
class QuarticScan:
    cutoff: int
    scanned: int
    first_pass: set[int]
    survivors: set[int]


def _quartic_status(args: tuple[int, int, int]) -> tuple[int, bool, bool]:
    q, t_max, r_max = args
    try:
        first = best_partition(q, 4, t_max, 0) is not None
        full = first or best_partition(q, 4, t_max, r_max) is not None
    except ArithmeticError as exc:
        raise ArithmeticError(f"quartic scan failed at q={q}: {exc}") from exc
    return q, first, full


def quartic_scan(t_max: int = 4, r_max: int = 4, workers: int = 1, limit: int | None = None) -> QuarticScan:
    cutoff = quartic_cutoff(14, t_max, r_max)
    hi = cutoff if limit is None else min(limit, cutoff)
    qs = [q for _, _, q in prime_powers_between(2, hi)]
    jobs = [(q, t_max, r_max) for q in qs]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_quartic_status, jobs, chunksize=256))
    else:
        results = [_quartic_status(j) for j in jobs]
    first = {q for q, ok, _ in results if not ok}
    final = {q for q, _, ok in results if not ok}
    log.info("quartic scan to %d: %d prime powers, %d after r=0, %d final", hi, len(qs), len(first), len(final))
    return QuarticScan(cutoff, len(qs), first, final)


def quartic_pipeline(t_max: int = 4, r_max: int = 4, workers: int = 1) -> set[int]:
    return quartic_scan(t_max, r_max, workers).survivors
