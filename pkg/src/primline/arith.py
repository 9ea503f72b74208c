"""Exact integer number theory for values below 2**127.

Primality is decided by Miller-Rabin with a fixed witness set (proven
correct below 3.3e24) backed by a strong Lucas test above that bound.
Factorization is trial division followed by Brent's variant of Pollard rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

__all__ = [
    "FactorizationError",
    "Factorization",
    "is_prime",
    "factorize",
    "radical",
    "theta",
    "euler_phi",
    "primes_below",
    "prime_powers_between",
]

MAX_VALUE = 1 << 127
TRIAL_BOUND = 100_000
RHO_ITERATIONS = 1 << 22
RHO_ATTEMPTS = 24

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Smallest strong pseudoprime to all of _MR_BASES.
_MR_PROVEN_BOUND = 3_317_044_064_679_887_385_961_981


class FactorizationError(ArithmeticError):
    """A cofactor could not be split within the configured effort budget."""


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __len__(self):
        return len(self.factors)


@lru_cache(maxsize=None)
def primes_below(limit: int) -> tuple[int, ...]:
    """All primes p < limit (sieve of Eratosthenes)."""
    if limit <= 2:
        return ()
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit - 1) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def _strong_probable_prime(n: int, base: int) -> bool:
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
        if D == 13 and math.isqrt(n) ** 2 == n:
            return False
    P, Q = 1, (1 - D) // 4
    d = n + 1
    s = (d & -d).bit_length() - 1
    d >>= s
    # Binary ladder for U_d, V_d.
    U, V, Qk = 0, 2, 1
    inv2 = (n + 1) // 2
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    if not all(_strong_probable_prime(n, b) for b in _MR_BASES):
        return False
    if n < _MR_PROVEN_BOUND:
        return True
    return _strong_lucas(n)


def _brent_rho(n: int, c: int) -> int | None:
    """One Brent cycle-finding run with x -> x^2 + c. Returns a proper factor or None."""
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    spent = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        spent += r
        if spent > RHO_ITERATIONS:
            return None
    if g == n:
        # Backtrack one step at a time.
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    for c in range(1, RHO_ATTEMPTS + 1):
        d = _brent_rho(n, c)
        if d is not None:
            _split(d, out)
            _split(n // d, out)
            return
    raise FactorizationError(f"could not split composite cofactor {n}")


def factorize(n: int, trial_bound: int = TRIAL_BOUND) -> Factorization:
    """Complete prime factorization of 1 <= n < 2**127.

    Raises FactorizationError rather than returning a partial result.
    """
    if not 1 <= n < MAX_VALUE:
        raise ValueError(f"factorize expects 1 <= n < 2**127, got {n}")
    found: dict[int, int] = {}
    rest = n
    for p in primes_below(trial_bound):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if rest > 1:
        if rest < trial_bound * trial_bound:
            found[rest] = found.get(rest, 0) + 1
        else:
            _split(rest, found)
    return Factorization(n, tuple(sorted(found.items())))


def factorize_product(parts: list[int]) -> Factorization:
    """Factor a product by factoring each (smaller) part and merging."""
    merged: dict[int, int] = {}
    n = 1
    for part in parts:
        n *= part
        for p, e in factorize(part).factors:
            merged[p] = merged.get(p, 0) + e
    return Factorization(n, tuple(sorted(merged.items())))


def radical(f: Factorization) -> int:
    return math.prod(f.primes)


def theta(f: Factorization) -> Fraction:
    """phi(n)/n as an exact rational."""
    out = Fraction(1)
    for p in f.primes:
        out *= Fraction(p - 1, p)
    return out


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def prime_powers_between(lo: int, hi: int) -> list[tuple[int, int, int]]:
    """Every q = p**alpha with lo <= q <= hi, as (p, alpha, q), ascending in q."""
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got ({lo}, {hi})")
    out = []
    for p in primes_below(hi + 1):
        q, alpha = p, 1
        while q <= hi:
            if q >= lo:
                out.append((p, alpha, q))
            q *= p
            alpha += 1
    out.sort(key=lambda t: t[2])
    return out


def prime_power_decompose(q: int) -> tuple[int, int] | None:
    """(p, alpha) with q = p**alpha, or None if q is not a prime power."""
    if q < 2:
        return None
    for alpha in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / alpha))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**alpha == q and is_prime(cand):
                return cand, alpha
    return None


def divisors(f: Factorization) -> Iterator[int]:
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    yield from sorted(divs)
