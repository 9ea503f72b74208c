"""Table-driven arithmetic in F_{q^n}, q = p**alpha.

The field is built directly over the prime field as F_p[x]/(f) with
deg f = alpha*n and f primitive, so x (called omega) generates the
multiplicative group.  Elements are handled as discrete logarithms with
respect to omega; ZERO (-1) stands for the zero element.  Three tables
back all arithmetic:

    exp[k]   packed coefficients of omega**k  (sum c_i p**i)
    log[v]   inverse of exp, log[0] == ZERO
    zech[k]  log(1 + omega**k), ZERO where omega**k == -1

so multiplication is index addition and addition is one Zech lookup.
F_q sits inside as {ZERO} u {omega**(j*tau)}, tau = (q^n-1)/(q-1).
"""

from __future__ import annotations

import itertools
import logging
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import Factorization, factorize, is_prime, radical

log = logging.getLogger(__name__)

__all__ = [
    "ZERO",
    "DEFAULT_MAX_ORDER",
    "FieldBudgetError",
    "FieldCacheError",
    "FieldCtx",
    "build_field",
    "field_for_q",
    "add",
    "sub",
    "neg",
    "mul",
    "inv",
    "from_affine",
    "to_affine",
    "is_primitive",
    "generates",
    "save_field",
    "load_field",
]

ZERO = -1
DEFAULT_MAX_ORDER = 1 << 28
_BLOCK = 1 << 16


class FieldBudgetError(MemoryError):
    """Requested field exceeds the configured table budget."""


class FieldCacheError(ValueError):
    """A cached field file is truncated, foreign or inconsistent."""


# ---------------------------------------------------------------------------
# Polynomials over F_p, as coefficient lists lowest degree first.


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    d = len(f) - 1
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    # f is monic: reduce from the top.
    for i in range(len(prod) - 1, d - 1, -1):
        c = prod[i] % p
        if c:
            for j in range(d):
                prod[i - d + j] -= c * f[j]
    return [c % p for c in prod[:d]]


def _poly_powmod_x(e: int, f: list[int], p: int) -> list[int]:
    d = len(f) - 1
    result = [1] + [0] * (d - 1)
    base = [0] * d
    if d == 1:
        base = [(-f[0]) % p]
    else:
        base[1] = 1
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, f, p)
    return result


def _is_primitive_poly(f: list[int], p: int, order_fact: Factorization) -> bool:
    d = len(f) - 1
    if f[0] == 0:
        return False
    one = [1] + [0] * (d - 1)
    N = p**d - 1
    if _poly_powmod_x(N, f, p) != one:
        return False
    return all(_poly_powmod_x(N // ell, f, p) != one for ell in order_fact.primes)


def find_primitive_polynomial(p: int, d: int, order_fact: Factorization | None = None) -> list[int]:
    """First monic primitive polynomial of degree d over F_p.

    Candidates are scanned lexicographically in (c_{d-1}, ..., c_0);
    the result is returned lowest degree first, monic term included.
    """
    if order_fact is None:
        order_fact = factorize(p**d - 1)
    for coeffs in itertools.product(range(p), repeat=d):
        f = list(reversed(coeffs)) + [1]
        if _is_primitive_poly(f, p, order_fact):
            return f
    raise ArithmeticError(f"no primitive polynomial of degree {d} over F_{p}")


# ---------------------------------------------------------------------------


@dataclass(eq=False)
class FieldCtx:
    p: int
    alpha: int
    n: int
    modulus: tuple[int, ...]
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    zech: np.ndarray = field(repr=False)
    order_factorization: Factorization = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.alpha

    @property
    def degree(self) -> int:
        """Degree over the prime field, alpha * n."""
        return self.alpha * self.n

    @property
    def order(self) -> int:
        return self.q**self.n

    @property
    def N(self) -> int:
        """Size of the multiplicative group, q^n - 1."""
        return self.order - 1

    @property
    def tau(self) -> int:
        return self.N // (self.q - 1)

    @property
    def R(self) -> int:
        return radical(self.order_factorization)

    @property
    def minus_one(self) -> int:
        return 0 if self.p == 2 else self.N // 2

    def fq_nonzero(self) -> np.ndarray:
        """Logs of F_q^*, ascending."""
        return np.arange(self.q - 1, dtype=np.int64) * self.tau

    def fq_elements(self) -> list[int]:
        """F_q in canonical order: ZERO, then ascending log index."""
        return [ZERO] + [int(j) * self.tau for j in range(self.q - 1)]

    def primitive_mask(self) -> np.ndarray:
        """Boolean table over residues mod R: True where gcd(k, R) == 1."""
        if not hasattr(self, "_prim_mask"):
            mask = np.ones(self.R, dtype=bool)
            for ell in self.order_factorization.primes:
                mask[::ell] = False
            mask.flags.writeable = False
            self._prim_mask = mask
        return self._prim_mask

    def subfield_strides(self) -> list[int]:
        """(q^n-1)/(q^d-1) for each maximal proper divisor d of n.

        A nonzero omega**k lies in F_{q^d} iff the stride divides k.
        """
        ds = [d for d in range(1, self.n) if self.n % d == 0]
        maximal = [d for d in ds if not any(e != d and e % d == 0 for e in ds)]
        return [self.N // (self.q**d - 1) for d in maximal]

    def pack(self, coeffs_low_first) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs_low_first))

    def unpack(self, v: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            v, c = divmod(v, self.p)
            out.append(c)
        return out

    # Vectorised log-domain helpers.

    def add_logs(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Elementwise sum of log arrays (ZERO aware)."""
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        x, y = np.broadcast_arrays(x, y)
        out = np.where(x == ZERO, y, x).astype(np.int64)
        both = (x != ZERO) & (y != ZERO)
        if both.any():
            xb, yb = x[both], y[both]
            z = self.zech[(yb - xb) % self.N].astype(np.int64)
            out[both] = np.where(z == ZERO, ZERO, (xb + z) % self.N)
        return out


def _mul_matrix(elem: list[int], f: list[int], p: int) -> np.ndarray:
    """Matrix M with digits(y * elem) = digits(y) @ M mod p."""
    d = len(f) - 1
    rows = []
    xi = [1] + [0] * (d - 1)
    x = [0, 1] + [0] * (d - 2) if d > 1 else [(-f[0]) % p]
    for _ in range(d):
        rows.append(_poly_mulmod(xi, elem, f, p))
        xi = _poly_mulmod(xi, x, f, p)
    return np.array(rows, dtype=np.int64)


def _build_tables(p: int, f: list[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = len(f) - 1
    N = p**d - 1
    weights = p ** np.arange(d, dtype=np.int64)
    exp = np.empty(N, dtype=np.int32)

    # First block by repeated multiplication by omega.
    B = min(_BLOCK, N)
    block = np.zeros((B, d), dtype=np.int64)
    cur = [1] + [0] * (d - 1)
    x = [0, 1] + [0] * (d - 2) if d > 1 else [(-f[0]) % p]
    for k in range(B):
        block[k] = cur
        cur = _poly_mulmod(cur, x, f, p)
    step = _mul_matrix(cur, f, p)  # multiplication by omega**B
    start = 0
    while start < N:
        n_here = min(B, N - start)
        exp[start : start + n_here] = block[:n_here] @ weights
        start += n_here
        if start < N:
            block = (block @ step) % p

    logt = np.full(N + 1, ZERO, dtype=np.int32)
    logt[exp] = np.arange(N, dtype=np.int32)
    if (logt[1:] == ZERO).any() or logt[0] != ZERO:
        raise ArithmeticError("exp table is not a permutation of F^*")

    zech = np.empty(N, dtype=np.int32)
    for s in range(0, N, 1 << 20):
        chunk = exp[s : s + (1 << 20)].astype(np.int64)
        low = chunk % p
        plus_one = np.where(low == p - 1, chunk - (p - 1), chunk + 1)
        zech[s : s + len(chunk)] = logt[plus_one]
    return exp, logt, zech


def build_field(
    p: int,
    alpha: int,
    n: int,
    max_order: int = DEFAULT_MAX_ORDER,
    cache_dir: str | Path | None = None,
) -> FieldCtx:
    """Construct F_{q^n}, q = p**alpha, with full exp/log/Zech tables."""
    if not is_prime(p) or alpha < 1 or n < 1:
        raise ValueError(f"bad field parameters p={p} alpha={alpha} n={n}")
    d = alpha * n
    order = p**d
    if order > max_order:
        raise FieldBudgetError(f"F_{{{p}^{d}}} has {order} elements, budget is {max_order}")
    if cache_dir is not None:
        path = Path(cache_dir) / f"field_{p}_{alpha}_{n}.bin"
        if path.exists():
            try:
                return load_field(path)
            except FieldCacheError as exc:
                log.warning("discarding field cache %s: %s", path, exc)
    fact = factorize(order - 1)
    f = find_primitive_polynomial(p, d, fact)
    exp, logt, zech = _build_tables(p, f)
    ctx = FieldCtx(p, alpha, n, tuple(f), exp, logt, zech, fact)
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        save_field(ctx, Path(cache_dir) / f"field_{p}_{alpha}_{n}.bin")
    return ctx


def field_for_q(q: int, n: int, **kwargs) -> FieldCtx:
    from .arith import prime_power_decompose

    pa = prime_power_decompose(q)
    if pa is None:
        raise ValueError(f"{q} is not a prime power")
    return build_field(pa[0], pa[1], n, **kwargs)


# ---------------------------------------------------------------------------
# Scalar arithmetic on log indices.


def mul(ctx: FieldCtx, x: int, y: int) -> int:
    if x == ZERO or y == ZERO:
        return ZERO
    return (x + y) % ctx.N


def inv(ctx: FieldCtx, x: int) -> int:
    if x == ZERO:
        raise ZeroDivisionError("inverse of zero")
    return (-x) % ctx.N


def neg(ctx: FieldCtx, x: int) -> int:
    if x == ZERO:
        return ZERO
    return (x + ctx.minus_one) % ctx.N


def add(ctx: FieldCtx, x: int, y: int) -> int:
    if x == ZERO:
        return y
    if y == ZERO:
        return x
    z = int(ctx.zech[(y - x) % ctx.N])
    return ZERO if z == ZERO else (x + z) % ctx.N


def sub(ctx: FieldCtx, x: int, y: int) -> int:
    return add(ctx, x, neg(ctx, y))


def power(ctx: FieldCtx, x: int, e: int) -> int:
    if x == ZERO:
        return ZERO if e > 0 else 0
    return (x * e) % ctx.N


def from_affine(ctx: FieldCtx, coeffs) -> int:
    """Element with F_p coordinates [c_{d-1}, ..., c_1, c_0] in the power basis."""
    coeffs = list(coeffs)
    if len(coeffs) != ctx.degree:
        raise ValueError(f"expected {ctx.degree} coordinates, got {len(coeffs)}")
    v = ctx.pack(reversed([c % ctx.p for c in coeffs]))
    return int(ctx.log[v])


def to_affine(ctx: FieldCtx, x: int) -> list[int]:
    if x == ZERO:
        return [0] * ctx.degree
    return list(reversed(ctx.unpack(int(ctx.exp[x % ctx.N]))))


def is_primitive(ctx: FieldCtx, x: int) -> bool:
    return x != ZERO and math.gcd(x, ctx.R) == 1


def in_subfield(ctx: FieldCtx, x: int, d: int) -> bool:
    """Membership in F_{q^d} for d | n."""
    if x == ZERO:
        return True
    return x % (ctx.N // (ctx.q**d - 1)) == 0


def generates(ctx: FieldCtx, gamma: int) -> bool:
    """True iff F_q(gamma) is the whole field."""
    if gamma == ZERO:
        return False
    return all(gamma % s != 0 for s in ctx.subfield_strides())


def generates_mask(ctx: FieldCtx, logs: np.ndarray) -> np.ndarray:
    logs = np.asarray(logs, dtype=np.int64)
    ok = logs != ZERO
    for s in ctx.subfield_strides():
        ok &= logs % s != 0
    return ok


# ---------------------------------------------------------------------------
# Binary cache.

_MAGIC = b"PLFIELD1"
_HEADER = struct.Struct("<8sQQQQQ")


def save_field(ctx: FieldCtx, path: str | Path) -> None:
    """Header (p, alpha, n, order, degree), modulus, then the exp table."""
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, ctx.p, ctx.alpha, ctx.n, ctx.order, ctx.degree))
        fh.write(np.asarray(ctx.modulus, dtype=np.int64).tobytes())
        fh.write(np.ascontiguousarray(ctx.exp, dtype=np.int32).tobytes())


def load_field(path: str | Path) -> FieldCtx:
    raw = Path(path).read_bytes()
    try:
        magic, p, alpha, n, order, d = _HEADER.unpack_from(raw)
    except struct.error:
        raise FieldCacheError("truncated field cache header") from None
    if magic != _MAGIC:
        raise FieldCacheError("not a field cache file")
    if p**d != order or alpha * n != d:
        raise FieldCacheError("inconsistent field cache header")
    off = _HEADER.size
    if len(raw) != off + 8 * (d + 1) + 4 * (order - 1):
        raise FieldCacheError("field cache has the wrong length")
    f = [int(c) for c in np.frombuffer(raw, dtype=np.int64, count=d + 1, offset=off)]
    off += 8 * (d + 1)
    exp = np.frombuffer(raw, dtype=np.int32, count=order - 1, offset=off).copy()
    fact = factorize(order - 1)
    if f[-1] != 1 or not _is_primitive_poly(f, p, fact):
        raise FieldCacheError("cached modulus does not have a primitive root")
    # The table must be the successive powers of the root.
    weights = p ** np.arange(d, dtype=np.int64)
    digits = (exp.astype(np.int64)[:, None] // weights) % p
    x = [0, 1] + [0] * (d - 2) if d > 1 else [(-f[0]) % p]
    step = _mul_matrix(x, f, p)
    if exp[0] != 1 or not np.array_equal((digits[:-1] @ step) % p, digits[1:]):
        raise FieldCacheError("cached exp table is not the power sequence of omega")
    logt = np.full(order, ZERO, dtype=np.int32)
    logt[exp] = np.arange(order - 1, dtype=np.int32)
    zech = np.empty(order - 1, dtype=np.int32)
    e64 = exp.astype(np.int64)
    zech[:] = logt[np.where(e64 % p == p - 1, e64 - (p - 1), e64 + 1)]
    return FieldCtx(p, alpha, n, tuple(f), exp, logt, zech, fact)
