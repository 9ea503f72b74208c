"""Multiplicative character sums, e-free counting and the sieve inequalities.

Characters of F_{q^n}^* are indexed by j in [0, N): chi_j(omega^k) =
exp(2 pi i j k / N), which has order N / gcd(j, N).  Sums over a translate
{gamma + a : a in F_q} of all N characters at once are a single FFT of
the histogram of log(gamma + a).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import field as fld
from .arith import factorize
from .field import ZERO, FieldCtx
from .sieve import SievePartition

__all__ = [
    "Character",
    "FreeCount",
    "BoundReport",
    "coset_representatives",
    "char_sum",
    "all_char_sums",
    "verify_katz",
    "verify_cubic_bound",
    "TUDecomposition",
    "tu_decomposition",
    "is_efree",
    "count_N",
    "SieveInequalityReport",
    "verify_sieve_inequalities",
    "enumerate_partitions",
]

TOL = 1e-9
DEFAULT_EXHAUSTIVE_CAP = 1 << 14


@dataclass(frozen=True)
class Character:
    ctx: FieldCtx
    d: int
    u: int = 1

    def __post_init__(self):
        if self.ctx.N % self.d:
            raise ValueError(f"character order {self.d} does not divide {self.ctx.N}")
        if math.gcd(self.u, self.d) != 1:
            raise ValueError(f"unit index {self.u} not coprime to {self.d}")

    @property
    def principal(self) -> bool:
        return self.d == 1

    @property
    def index(self) -> int:
        """j with chi = chi_j."""
        return (self.u * (self.ctx.N // self.d)) % self.ctx.N

    def __call__(self, x):
        """Value at log index x (scalar or array); 0 at ZERO."""
        x = np.asarray(x, dtype=np.int64)
        val = np.exp(2j * np.pi * ((self.u * (x % self.d)) % self.d) / self.d)
        return np.where(x == ZERO, 0.0, val)


@dataclass(frozen=True)
class FreeCount:
    e: int
    value: int


@dataclass
class BoundReport:
    q: int
    n: int
    check_name: str
    max_ratio: float
    passed: bool
    counts: dict = field(default_factory=dict)
    witness: dict | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def coset_representatives(ctx: FieldCtx) -> np.ndarray:
    """Logs of sum_{i=1}^{n-1} lambda_i omega^i over all lambda in F_q.

    One element per additive coset of F_q; index order is lexicographic in
    (lambda_{n-1}, ..., lambda_1) with ZERO first then ascending logs.
    """
    fq = np.array(ctx.fq_elements(), dtype=np.int64)
    reps = np.array([ZERO], dtype=np.int64)
    for i in range(1, ctx.n):
        terms = np.where(fq == ZERO, ZERO, (fq + i) % ctx.N)
        # Higher powers vary slowest.
        reps = ctx.add_logs(terms[:, None], reps[None, :]).ravel()
    return reps


def translate_logs(ctx: FieldCtx, gamma: int) -> np.ndarray:
    """log(gamma + a) for a in F_q in canonical order."""
    fq = np.array(ctx.fq_elements(), dtype=np.int64)
    return ctx.add_logs(np.full_like(fq, gamma), fq)


def char_sum(ctx: FieldCtx, gamma: int, chi: Character) -> complex:
    """S_gamma(chi) = sum over a in F_q of chi(gamma + a)."""
    return complex(np.sum(chi(translate_logs(ctx, gamma))))


def all_char_sums(ctx: FieldCtx, gamma: int) -> np.ndarray:
    """S_gamma(chi_j) for every j in [0, N) via an inverse FFT."""
    logs = translate_logs(ctx, gamma)
    hist = np.bincount(logs[logs != ZERO], minlength=ctx.N).astype(float)
    return np.fft.ifft(hist) * ctx.N


def _generating_reps(ctx: FieldCtx) -> np.ndarray:
    reps = coset_representatives(ctx)
    return reps[fld.generates_mask(ctx, reps)]


def _check_cap(ctx: FieldCtx, cap: int) -> None:
    if ctx.order > cap:
        raise ValueError(f"field of order {ctx.order} exceeds exhaustive cap {cap}")


def verify_katz(ctx: FieldCtx, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> BoundReport:
    """max |S_gamma(chi)| / ((n-1) sqrt q) over generators and non-principal chi."""
    _check_cap(ctx, cap)
    bound = (ctx.n - 1) * math.sqrt(ctx.q)
    best, witness, sums = 0.0, None, 0
    for g in _generating_reps(ctx):
        mags = np.abs(all_char_sums(ctx, int(g)))[1:]
        sums += mags.size
        j = int(np.argmax(mags))
        if mags[j] / bound > best:
            best = float(mags[j] / bound)
            witness = {"gamma": int(g), "chi_index": j + 1, "abs_sum": float(mags[j])}
    return BoundReport(ctx.q, ctx.n, "katz", best, best <= 1 + TOL, {"sums": sums}, witness)


def verify_cubic_bound(
    ctx: FieldCtx, cap: int = DEFAULT_EXHAUSTIVE_CAP, betas: int = 8, seed: int = 0
) -> BoundReport:
    """|S_gamma(chi)| <= sqrt q + 1 for chi of order dividing q^2+q+1.

    Also confirms chi(c) = 1 on F_q^* and that scaling by beta only
    rotates the sum, on a seeded sample of beta.
    """
    if ctx.n != 3:
        raise ValueError("the sharper bound is for cubic extensions")
    _check_cap(ctx, cap)
    q, N = ctx.q, ctx.N
    bound = math.sqrt(q) + 1
    js = np.arange(q - 1, N, q - 1)  # order divides tau  <=>  (q-1) | j
    fq = ctx.fq_nonzero()
    trivial_on_fq = bool(np.all((np.outer(js, fq) % N) == 0))
    rng = np.random.default_rng(seed)
    sample = rng.integers(0, N, size=betas)
    best, witness, rotation_ok, sums = 0.0, None, True, 0
    for g in _generating_reps(ctx):
        S = all_char_sums(ctx, int(g))[js]
        sums += S.size
        mags = np.abs(S)
        i = int(np.argmax(mags))
        if mags[i] / bound > best:
            best = float(mags[i] / bound)
            witness = {"gamma": int(g), "chi_index": int(js[i]), "abs_sum": float(mags[i])}
        logs = translate_logs(ctx, int(g))
        for b in sample:
            phases = np.exp(2j * np.pi * np.outer(js, (logs + b) % N) / N).sum(axis=1)
            rotation_ok &= bool(np.allclose(np.abs(phases), mags, atol=TOL))
    passed = best <= 1 + TOL and trivial_on_fq and rotation_ok
    counts = {"sums": sums, "trivial_on_fq": trivial_on_fq, "beta_rotation": rotation_ok}
    return BoundReport(q, 3, "cubic_bound", best, passed, counts, witness)


@dataclass
class TUDecomposition:
    T_distinct: int
    U_size: int
    T0_distinct: int
    T0_multiset: int
    T0_avoids_fq: bool
    U1_size: int
    u1_u_1_disjoint: bool
    u_is_union: bool


def tu_decomposition(ctx: FieldCtx, gamma: int) -> TUDecomposition:
    """Structure of T = {c(gamma+a)/(gamma+b)} and its complement U in F^*."""
    if ctx.n != 3 or not fld.generates(ctx, gamma):
        raise ValueError("tu_decomposition needs n = 3 and a generating gamma")
    N, tau = ctx.N, ctx.tau
    trans = translate_logs(ctx, gamma)  # gamma + a, a in F_q
    fq = ctx.fq_nonzero()
    q = ctx.q
    a_idx, b_idx = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    off = a_idx != b_idx
    ratio = (trans[a_idx] - trans[b_idx]) % N
    t0 = ((ratio[off][:, None] + fq[None, :]) % N).ravel()
    t_all = np.concatenate([t0, fq])
    T = np.unique(t_all)
    T0 = np.unique(t0)
    U = np.setdiff1d(np.arange(N), T)
    U1 = np.unique((trans[:, None] + fq[None, :]) % N)
    Um1 = np.unique((-U1) % N)
    return TUDecomposition(
        T_distinct=int(T.size),
        U_size=int(U.size),
        T0_distinct=int(T0.size),
        T0_multiset=int(t0.size),
        T0_avoids_fq=bool(np.all(T0 % tau != 0)),
        U1_size=int(U1.size),
        u1_u_1_disjoint=bool(np.intersect1d(U1, Um1).size == 0),
        u_is_union=bool(np.array_equal(np.union1d(U1, Um1), U)),
    )


def is_efree(ctx: FieldCtx, x: int, e: int) -> bool:
    """x is e-free: for no prime l | e is x an l-th power."""
    if x == ZERO:
        raise ValueError("zero is not e-free")
    if ctx.N % e:
        raise ValueError(f"{e} does not divide q^n - 1")
    return all(x % ell for ell in factorize(e).primes)


def _efree_mask(logs: np.ndarray, e: int) -> np.ndarray:
    ok = np.ones(logs.shape, dtype=bool)
    for ell in factorize(e).primes:
        ok &= logs % ell != 0
    return ok


def count_N(ctx: FieldCtx, beta: int, gamma: int, e: int) -> FreeCount:
    """Number of a in F_q with beta(gamma + a) e-free."""
    if beta == ZERO or not fld.generates(ctx, gamma):
        raise ValueError("count_N needs beta != 0 and a generating gamma")
    if ctx.N % e:
        raise ValueError(f"{e} does not divide q^n - 1")
    logs = (translate_logs(ctx, gamma) + beta) % ctx.N
    return FreeCount(e, int(_efree_mask(logs, e).sum()))


# ---------------------------------------------------------------------------


def enumerate_partitions(q: int, n: int):
    """Every assignment of the primes of q^n-1 to core, sieving and special roles."""
    import itertools

    primes = factorize(q**n - 1).primes
    for roles in itertools.product(range(3), repeat=len(primes)):
        groups = [tuple(p for p, r in zip(primes, roles) if r == g) for g in range(3)]
        yield SievePartition(q, n, *groups)


@dataclass
class SieveInequalityReport:
    q: int
    n: int
    partition: dict
    counts: dict
    relations: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.relations.values())


def verify_sieve_inequalities(
    ctx: FieldCtx, beta: int, gamma: int, part: SievePartition
) -> SieveInequalityReport:
    """Check the counting inequalities behind the basic sieve for one (beta, gamma)."""
    primes = set(ctx.order_factorization.primes)
    roles = part.core_primes + part.sieving_primes + part.special_primes
    if part.q != ctx.q or part.n != ctx.n or len(set(roles)) != len(roles) or set(roles) != primes:
        raise ValueError("partition inconsistent with the factorization of q^n - 1")
    q, n = ctx.q, ctx.n
    sq = math.sqrt(q)
    k = part.k
    m = part.m
    t = part.t
    delta, eps = part.delta, part.epsilon

    def N(e: int) -> int:
        return count_N(ctx, beta, gamma, e).value

    N_all = N(ctx.N)
    N1 = N(1)
    Nk = N(k)
    N_kp = N(k * math.prod(part.sieving_primes))
    N_l = {l: N(l) for l in part.special_primes}
    N_kpi = {p: N(k * p) for p in part.sieving_primes}

    rhs1 = N_kp + sum(N_l.values()) - part.r * N1
    rhs1_alt = (
        N_kp + sum((N_l[l] - (1 - Fraction(1, l)) * N1 for l in part.special_primes), Fraction(0)) - eps * N1
    )
    rhs2 = delta * Nk + sum(
        (N_kpi[p] - (1 - Fraction(1, p)) * Nk for p in part.sieving_primes), Fraction(0)
    )
    rel = {
        "eq1": N_all >= rhs1 and rhs1 == rhs1_alt,
        "eq2": N_kp >= rhs2,
        "Nk": Nk >= float(m) * (q - (n - 1) * (2**t - 1) * sq) - TOL,
        "Nkpi": all(
            abs(float(N_kpi[p] - (1 - Fraction(1, p)) * Nk))
            <= float((1 - Fraction(1, p)) * m) * (n - 1) * 2**t * sq + TOL
            for p in part.sieving_primes
        ),
        "Nlj": all(
            abs(float(N_l[l] - (1 - Fraction(1, l)) * N1)) <= float(1 - Fraction(1, l)) * (n - 1) * sq + TOL
            for l in part.special_primes
        ),
        "N1": N1 == q,
    }
    counts = {"N_all": N_all, "N1": N1, "Nk": Nk, "N_kp": N_kp, "N_l": N_l, "N_kpi": N_kpi}
    return SieveInequalityReport(q, n, part.to_json(), counts, rel)
