"""Exhaustive deciders for the line and translate problems.

All deciders run in the log domain: a candidate beta(gamma + a) is a log
index, and it is primitive iff its residue mod R = rad(q^n - 1) is a unit,
which is a single lookup in a boolean table of length R.

Every decider is a *plan*: an outer range cut into fixed-size chunks, each
chunk scanned independently (vectorised over the outer index) and
reporting its lexicographically first bad (outer, inner) class.  Chunks
are merged in order, so verdicts, witnesses and statistics do not depend
on how many workers ran them.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from . import field as fld
from .charsum import coset_representatives, translate_logs
from .field import ZERO, FieldBudgetError, FieldCtx

log = logging.getLogger(__name__)

__all__ = [
    "Witness",
    "Verdict",
    "CheckpointMismatch",
    "CampaignConfig",
    "line_gamma_reps",
    "check_line_alg1",
    "check_line_alg2",
    "check_line_quartic",
    "check_translate",
    "brute_force_line",
    "find_bad_pair",
    "verify_witness",
    "decide",
    "run_campaign",
]

CHECKPOINT_VERSION = 1
BRUTE_FORCE_CAP = 5**6


def _enc(x: int) -> int | None:
    return None if x == ZERO else int(x)


def _dec(x: int | None) -> int:
    return ZERO if x is None else int(x)


@dataclass(frozen=True)
class Witness:
    """A bad pair: beta(gamma + a) is non-primitive for every listed a.

    Elements are log indices relative to the root of ``modulus``.
    """

    beta: int
    gamma: int
    failing_a: tuple[int, ...]
    cls: dict
    modulus: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "beta": _enc(self.beta),
            "gamma": _enc(self.gamma),
            "failing_a": [_enc(a) for a in self.failing_a],
            "class": dict(self.cls),
            "modulus": list(self.modulus),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        return cls(
            _dec(d["beta"]),
            _dec(d["gamma"]),
            tuple(_dec(a) for a in d["failing_a"]),
            dict(d["class"]),
            tuple(d["modulus"]),
        )


@dataclass
class Verdict:
    q: int
    n: int
    problem: str
    status: str  # "member" | "nonmember" | "unknown"
    witness: Witness | None = None
    stats: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def key(self) -> tuple[int, int, str]:
        return (self.q, self.n, self.problem)

    def to_json(self, timing: bool = True) -> dict:
        d = {
            "q": self.q,
            "n": self.n,
            "problem": self.problem,
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "stats": dict(self.stats),
        }
        if timing:
            d["elapsed_ms"] = int(self.elapsed_ms)
        return d

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        for key in ("q", "n", "problem", "status"):
            if key not in d:
                raise ValueError(f"verdict record missing {key!r}")
        if d["status"] not in ("member", "nonmember", "unknown"):
            raise ValueError(f"bad status {d['status']!r}")
        w = d.get("witness")
        return cls(
            int(d["q"]),
            int(d["n"]),
            str(d["problem"]),
            d["status"],
            None if w is None else Witness.from_json(w),
            dict(d.get("stats", {})),
            int(d.get("elapsed_ms", 0)),
        )

    @classmethod
    def loads(cls, line: str) -> "Verdict":
        return cls.from_json(json.loads(line))


# ---------------------------------------------------------------------------
# Class representatives.


def line_gamma_reps(ctx: FieldCtx) -> list[int]:
    """Affine-orbit representatives omega, omega^2 + u omega, omega^3 + t omega^2 + u omega, ...

    One per orbit of x -> lambda x + mu on F \\ F_q (leading coefficient 1,
    constant term 0), ordered by degree and then lexicographically in
    the lower coefficients.
    """
    fq = np.array(ctx.fq_elements(), dtype=np.int64)
    reps: list[int] = []
    lower = np.array([ZERO], dtype=np.int64)  # span of omega^1 .. omega^(deg-1)
    for deg in range(1, ctx.n):
        lead = np.full(lower.shape, deg, dtype=np.int64)
        reps.extend(int(x) for x in ctx.add_logs(lead, lower))
        terms = np.where(fq == ZERO, ZERO, (fq + deg) % ctx.N)
        lower = ctx.add_logs(terms[:, None], lower[None, :]).ravel()
    return reps


def alg2_inverse_reps(ctx: FieldCtx) -> list[int]:
    """gamma^{-1} for the cubic decider: 1/omega, then omega + u for u in F_q."""
    one_over_omega = ctx.N - 1
    return [one_over_omega] + [fld.add(ctx, 1, u) for u in ctx.fq_elements()]


# ---------------------------------------------------------------------------
# Plans.


@dataclass
class ChunkResult:
    lo: int
    hi: int
    bad: tuple[int, int] | None
    classes: int
    prim_tests: int


class _Plan:
    name: str
    problem: str
    default_chunk: int = 1 << 16

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.prim = ctx.primitive_mask()
        self.R = ctx.R

    units: int

    def scan(self, lo: int, hi: int) -> ChunkResult:
        raise NotImplementedError

    def witness(self, bad: tuple[int, int]) -> Witness:
        raise NotImplementedError

    def _resolve(self, outer: np.ndarray, offsets: np.ndarray) -> tuple[np.ndarray, int]:
        """Outer logs with no offset giving a primitive sum; also the number of tests made."""
        remaining = outer
        tests = 0
        for off in offsets:
            if remaining.size == 0:
                break
            tests += remaining.size
            remaining = remaining[~self.prim[(remaining + off) % self.R]]
        return remaining, tests


class InverseClassPlan(_Plan):
    """Outer loop over beta = omega^k, k < R; inner over gamma^{-1} classes.

    beta(1 + a gamma^{-1}) is tested for a in F_q^*; primitive beta are
    skipped since a = 0 already succeeds for them.
    """

    def __init__(self, ctx: FieldCtx, inverse_reps: list[int], name: str, skip_primitive: bool = True):
        super().__init__(ctx)
        self.name = name
        self.problem = "line"
        self.skip_primitive = skip_primitive
        self.inverse_reps = list(inverse_reps)
        fq = ctx.fq_nonzero()
        offsets = []
        for g in self.inverse_reps:
            logs = ctx.zech[(fq + g) % ctx.N].astype(np.int64)
            if (logs == ZERO).any():
                raise ArithmeticError("class representative lies in F_q")
            offsets.append(logs % self.R)
        self.offsets = np.array(offsets, dtype=np.int64).reshape(len(offsets), -1)
        self.units = self.R

    def scan(self, lo, hi):
        ks = np.arange(lo, hi, dtype=np.int64)
        if self.skip_primitive:
            ks = ks[~self.prim[ks]]
        bad = None
        tests = 0
        for c, offs in enumerate(self.offsets):
            cand = ks
            if not self.skip_primitive:
                tests += cand.size
                cand = cand[~self.prim[cand % self.R]]
            left, t = self._resolve(cand, offs)
            tests += t
            if left.size and (bad is None or int(left[0]) < bad[0]):
                bad = (int(left[0]), c)
        return ChunkResult(lo, hi, bad, int(ks.size) * len(self.offsets), tests)

    def witness(self, bad):
        k, c = bad
        ginv = self.inverse_reps[c]
        ctx = self.ctx
        # beta'(1 + a/gamma) = (beta'/gamma)(gamma + a)
        return Witness(
            beta=(k + ginv) % ctx.N,
            gamma=(-ginv) % ctx.N,
            failing_a=tuple(ctx.fq_elements()),
            cls={"algorithm": self.name, "k": k, "class_index": c, "gamma_inv": ginv},
            modulus=ctx.modulus,
        )


class Alg1Plan(_Plan):
    """Outer loop over gamma = lambda_2 omega^2 + lambda_1 omega; inner over beta = omega^k, k < tau."""

    name = "alg1"
    problem = "line"
    default_chunk = 16

    def __init__(self, ctx: FieldCtx):
        if ctx.n != 3:
            raise ValueError("alg1 is the cubic decider")
        super().__init__(ctx)
        self.gammas = alg1_gammas(ctx)
        self.units = len(self.gammas)
        self.ks = np.arange(ctx.tau, dtype=np.int64)

    def scan(self, lo, hi):
        bad = None
        tests = 0
        for idx in range(lo, hi):
            offs = translate_logs(self.ctx, self.gammas[idx]) % self.R
            left, t = self._resolve(self.ks, offs)
            tests += t
            if left.size and bad is None:
                bad = (idx, int(left[0]))
        return ChunkResult(lo, hi, bad, (hi - lo) * self.ctx.tau, tests)

    def witness(self, bad):
        idx, k = bad
        return Witness(
            beta=k,
            gamma=self.gammas[idx],
            failing_a=tuple(self.ctx.fq_elements()),
            cls={"algorithm": self.name, "gamma_index": idx, "k": k},
            modulus=self.ctx.modulus,
        )


def alg1_gammas(ctx: FieldCtx) -> list[int]:
    """omega^(1+k tau), omega^(2+k tau) for each k, then omega^(2+k2 tau) + omega^(1+k1 tau)."""
    tau, q = ctx.tau, ctx.q
    out = []
    for k in range(q - 1):
        out.append((1 + k * tau) % ctx.N)
        out.append((2 + k * tau) % ctx.N)
    for k1 in range(q - 1):
        for k2 in range(q - 1):
            out.append(fld.add(ctx, (2 + k2 * tau) % ctx.N, (1 + k1 * tau) % ctx.N))
    return out


class TranslatePlan(_Plan):
    """Outer loop over beta = sum lambda_i omega^i (zero constant term) that generate."""

    name = "translate"
    problem = "translate"

    def __init__(self, ctx: FieldCtx):
        super().__init__(ctx)
        self.reps = coset_representatives(ctx)
        self.gen = fld.generates_mask(ctx, self.reps)
        self.units = len(self.reps)
        self.fq = np.array(ctx.fq_elements(), dtype=np.int64)

    def scan(self, lo, hi):
        idx = np.arange(lo, hi, dtype=np.int64)
        idx = idx[self.gen[lo:hi]]
        betas = self.reps[idx]
        remaining = np.arange(idx.size)
        tests = 0
        for a in self.fq:
            if remaining.size == 0:
                break
            logs = self.ctx.add_logs(betas[remaining], np.int64(a))
            tests += remaining.size
            remaining = remaining[~self.prim[logs % self.R]]
        bad = (int(idx[remaining[0]]), 0) if remaining.size else None
        return ChunkResult(lo, hi, bad, int(idx.size), tests)

    def witness(self, bad):
        i, _ = bad
        return Witness(
            beta=0,
            gamma=int(self.reps[i]),
            failing_a=tuple(self.ctx.fq_elements()),
            cls={"algorithm": self.name, "rep_index": i},
            modulus=self.ctx.modulus,
        )


class BruteForcePlan(_Plan):
    """Every (beta, gamma) with beta != 0 and gamma generating; no reductions.

    Primitivity is tested as gcd(log, q^n - 1) == 1 directly.
    """

    name = "brute_force"
    problem = "line"
    default_chunk = 64

    def __init__(self, ctx: FieldCtx, cap: int = BRUTE_FORCE_CAP):
        if ctx.order > cap:
            raise ValueError(f"brute force capped at fields of order {cap}")
        super().__init__(ctx)
        allx = np.arange(ctx.N, dtype=np.int64)
        self.gammas = allx[fld.generates_mask(ctx, allx)]
        self.offsets = np.stack([translate_logs(ctx, int(g)) for g in self.gammas])  # (G, q)
        self.units = ctx.N

    def bad_mask(self, lo: int, hi: int) -> np.ndarray:
        betas = np.arange(lo, hi, dtype=np.int64)
        vals = (betas[:, None, None] + self.offsets[None, :, :]) % self.ctx.N
        return ~(np.gcd(vals, self.ctx.N) == 1).any(axis=2)  # (betas, G)

    def scan(self, lo, hi):
        bad_m = self.bad_mask(lo, hi)
        bad = None
        hits = np.argwhere(bad_m)
        if hits.size:
            b, g = hits[0]
            bad = (lo + int(b), int(g))
        pairs = (hi - lo) * len(self.gammas)
        return ChunkResult(lo, hi, bad, pairs, pairs * self.ctx.q)

    def witness(self, bad):
        b, g = bad
        return Witness(
            beta=b,
            gamma=int(self.gammas[g]),
            failing_a=tuple(self.ctx.fq_elements()),
            cls={"algorithm": self.name, "beta": b, "gamma_index": g},
            modulus=self.ctx.modulus,
        )

    def bad_indices(self) -> list[tuple[int, int]]:
        """Every bad (beta, gamma_index), in canonical order."""
        out = []
        for lo, hi in _chunks(0, self.units, self.default_chunk):
            out.extend((lo + int(b), int(g)) for b, g in np.argwhere(self.bad_mask(lo, hi)))
        return out

    def all_bad_pairs(self) -> list[tuple[int, int]]:
        return [(b, int(self.gammas[g])) for b, g in self.bad_indices()]


def make_plan(ctx: FieldCtx, problem: str, algorithm: str | None = None) -> _Plan:
    if problem == "translate":
        return TranslatePlan(ctx)
    if problem != "line":
        raise ValueError(f"unknown problem {problem!r}")
    if algorithm is None:
        algorithm = "alg2" if ctx.n == 3 else "quartic"
    if algorithm == "alg1":
        return Alg1Plan(ctx)
    if algorithm == "alg2":
        if ctx.n != 3:
            raise ValueError("alg2 is the cubic decider")
        return InverseClassPlan(ctx, alg2_inverse_reps(ctx), "alg2")
    if algorithm == "quartic":
        reps = [g for g in line_gamma_reps(ctx) if fld.generates(ctx, g)]
        return InverseClassPlan(ctx, [(-g) % ctx.N for g in reps], "quartic")
    if algorithm == "brute_force":
        return BruteForcePlan(ctx)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# Execution engine.


@dataclass
class _Progress:
    next_k: int
    classes: int = 0
    prim_tests: int = 0
    bad: tuple[int, int] | None = None


def _chunks(start: int, units: int, size: int) -> Iterator[tuple[int, int]]:
    for lo in range(start, units, size):
        yield lo, min(lo + size, units)


def _execute(
    plan: _Plan,
    workers: int = 1,
    chunk_size: int | None = None,
    progress: _Progress | None = None,
    on_chunk: Callable[[_Progress], None] | None = None,
) -> _Progress:
    size = chunk_size or plan.default_chunk
    prog = progress or _Progress(0)
    chunks = _chunks(prog.next_k, plan.units, size)

    def absorb(res: ChunkResult) -> bool:
        prog.classes += res.classes
        prog.prim_tests += res.prim_tests
        prog.next_k = res.hi
        prog.bad = res.bad
        if on_chunk is not None:
            on_chunk(prog)
        return res.bad is not None

    if workers <= 1:
        for lo, hi in chunks:
            if absorb(plan.scan(lo, hi)):
                break
        return prog

    with ThreadPoolExecutor(workers) as pool:
        pending = []
        done = False
        for lo, hi in chunks:
            pending.append(pool.submit(plan.scan, lo, hi))
            if len(pending) >= 2 * workers:
                if absorb(pending.pop(0).result()):
                    done = True
                    break
        if not done:
            for fut in pending:
                if absorb(fut.result()):
                    break
        for fut in pending:
            fut.cancel()
    return prog


def _verdict(plan: _Plan, prog: _Progress, elapsed_ms: int) -> Verdict:
    ctx = plan.ctx
    stats = {"algorithm": plan.name, "classes": prog.classes, "prim_tests": prog.prim_tests}
    if prog.bad is None:
        return Verdict(ctx.q, ctx.n, plan.problem, "member", None, stats, elapsed_ms)
    return Verdict(ctx.q, ctx.n, plan.problem, "nonmember", plan.witness(prog.bad), stats, elapsed_ms)


def decide(ctx: FieldCtx, problem: str, algorithm: str | None = None, workers: int = 1) -> Verdict:
    t0 = time.perf_counter()
    plan = make_plan(ctx, problem, algorithm)
    prog = _execute(plan, workers)
    return _verdict(plan, prog, int((time.perf_counter() - t0) * 1000))


def check_line_alg1(ctx: FieldCtx) -> Verdict:
    return decide(ctx, "line", "alg1")


def check_line_alg2(ctx: FieldCtx) -> Verdict:
    return decide(ctx, "line", "alg2")


def check_line_quartic(ctx: FieldCtx) -> Verdict:
    if ctx.n != 4:
        raise ValueError("quartic decider needs n = 4")
    return decide(ctx, "line", "quartic")


def check_translate(ctx: FieldCtx, n: int | None = None) -> Verdict:
    if n is not None and n != ctx.n:
        raise ValueError(f"field has degree {ctx.n}, not {n}")
    return decide(ctx, "translate")


def brute_force_line(ctx: FieldCtx, cap: int = BRUTE_FORCE_CAP) -> Verdict:
    """Walks the whole unreduced pair space (no early exit) so the counts are complete."""
    t0 = time.perf_counter()
    plan = BruteForcePlan(ctx, cap)
    bad = plan.bad_indices()
    pairs = plan.units * len(plan.gammas)
    stats = {"algorithm": plan.name, "classes": pairs, "prim_tests": pairs * ctx.q, "bad_pairs": len(bad)}
    elapsed = int((time.perf_counter() - t0) * 1000)
    if not bad:
        return Verdict(ctx.q, ctx.n, "line", "member", None, stats, elapsed)
    return Verdict(ctx.q, ctx.n, "line", "nonmember", plan.witness(bad[0]), stats, elapsed)


def find_bad_pair(ctx: FieldCtx, n: int | None = None, problem: str = "line") -> Witness | None:
    if n is not None and n != ctx.n:
        raise ValueError(f"field has degree {ctx.n}, not {n}")
    return decide(ctx, problem).witness


def verify_witness(ctx: FieldCtx, w: Witness, problem: str = "line") -> bool:
    """Independent recheck: gamma generates and beta(gamma + a) is never primitive."""
    if tuple(w.modulus) != tuple(ctx.modulus):
        return False
    if w.beta == ZERO or not fld.generates(ctx, w.gamma):
        return False
    if problem == "translate" and w.beta != 0:
        return False
    if set(w.failing_a) != set(ctx.fq_elements()):
        return False
    for a in ctx.fq_elements():
        x = fld.mul(ctx, w.beta, fld.add(ctx, w.gamma, a))
        if x != ZERO and math.gcd(x, ctx.N) == 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Pair reductions (used to cross-check deciders against the brute force).


def alg1_bad_classes(ctx: FieldCtx) -> set[tuple[int, int]]:
    """All bad (gamma_index, k) classes of the cubic outer-gamma decider."""
    plan = Alg1Plan(ctx)
    out = set()
    for idx, g in enumerate(plan.gammas):
        offs = translate_logs(ctx, g) % plan.R
        left, _ = plan._resolve(plan.ks, offs)
        out.update((idx, int(k)) for k in left)
    return out


def reduce_pair_alg1(ctx: FieldCtx, beta: int, gamma: int, gamma_index: dict[int, int] | None = None) -> tuple[int, int]:
    """Map (beta, gamma) to its (gamma_index, k) class: drop the F_q constant, move F_q^* onto gamma."""
    if gamma_index is None:
        gamma_index = {g: i for i, g in enumerate(alg1_gammas(ctx))}
    for a in ctx.fq_elements():
        g0 = fld.sub(ctx, gamma, a)
        if g0 in gamma_index:
            break
    else:
        raise ValueError("gamma does not generate")
    i, k = divmod(beta, ctx.tau)
    lam = (i * ctx.tau) % ctx.N
    return gamma_index[fld.mul(ctx, lam, g0)], k


def affine_orbit_map(ctx: FieldCtx, reps: list[int]) -> dict[int, tuple[int, int, int]]:
    """gamma -> (class index, lambda, mu) with gamma = lambda * rep + mu.

    Raises if two representatives share an orbit.
    """
    out: dict[int, tuple[int, int, int]] = {}
    for c, r in enumerate(reps):
        for lam in ctx.fq_nonzero():
            scaled = fld.mul(ctx, int(lam), r)
            for mu in ctx.fq_elements():
                g = fld.add(ctx, scaled, mu)
                if g in out:
                    raise ValueError(f"representatives {out[g][0]} and {c} share an orbit")
                out[g] = (c, int(lam), mu)
    return out


def reduce_pair_inverse(ctx: FieldCtx, plan: InverseClassPlan, beta: int, gamma: int, orbit=None) -> tuple[int, int]:
    """Map (beta, gamma) to the (k, class_index) visited by an inverse-class plan."""
    reps = [(-g) % ctx.N for g in plan.inverse_reps]
    if orbit is None:
        orbit = affine_orbit_map(ctx, reps)
    c, lam, _ = orbit[gamma]
    # beta(lam*rep + mu + a) = (beta*lam)(rep + a'), then beta' = beta*lam*rep
    k = (beta + lam + reps[c]) % ctx.N % ctx.R
    return k, c


# ---------------------------------------------------------------------------
# Campaigns.


class CheckpointMismatch(RuntimeError):
    """Checkpoint was written for a different campaign."""


@dataclass
class CampaignConfig:
    targets: list[tuple[int, int, str]]
    workers: int = 1
    checkpoint_path: str | Path | None = None
    checkpoint_every: int = 1
    chunk_size: int | None = None
    max_order: int = fld.DEFAULT_MAX_ORDER
    cache_dir: str | Path | None = None

    def plan_sha(self) -> str:
        blob = json.dumps(
            {"version": CHECKPOINT_VERSION, "targets": [list(t) for t in self.targets], "chunk": self.chunk_size},
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()


def _write_checkpoint(path: Path, state: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(state, sort_keys=True, indent=1))
    os.replace(tmp, path)


def _load_checkpoint(path: Path, sha: str) -> dict | None:
    if not path.exists():
        return None
    state = json.loads(path.read_text())
    if state.get("version") != CHECKPOINT_VERSION or state.get("fixture_sha") != sha:
        raise CheckpointMismatch(f"{path} belongs to a different campaign")
    return state


def run_campaign(
    config: CampaignConfig,
    on_checkpoint: Callable[[dict], None] | None = None,
) -> Iterator[Verdict]:
    """Decide every target in order, yielding one Verdict each.

    With a checkpoint path the collector persists progress every
    ``checkpoint_every`` chunks; rerunning the same config resumes from it.
    """
    sha = config.plan_sha()
    path = Path(config.checkpoint_path) if config.checkpoint_path else None
    state = _load_checkpoint(path, sha) if path else None
    if state is None:
        state = {"version": CHECKPOINT_VERSION, "fixture_sha": sha, "completed": [], "current": None}
    done = {(v["q"], v["n"], v["problem"]): v for v in state["completed"]}

    for q, n, problem in config.targets:
        key = (q, n, problem)
        if key in done:
            yield Verdict.from_json(done[key])
            continue
        t0 = time.perf_counter()
        try:
            ctx = fld.field_for_q(q, n, max_order=config.max_order, cache_dir=config.cache_dir)
        except FieldBudgetError as exc:
            log.error("skipping q=%d n=%d: %s", q, n, exc)
            yield Verdict(q, n, problem, "unknown", None, {"error": str(exc)}, 0)
            continue
        plan = make_plan(ctx, problem)
        cur = state.get("current")
        prog = _Progress(0)
        prior_ms = 0
        if cur and (cur["q"], cur["n"], cur["problem"], cur["algorithm"]) == (q, n, problem, plan.name):
            prog = _Progress(cur["next_k"], cur["stats"]["classes"], cur["stats"]["prim_tests"])
            prior_ms = cur.get("elapsed_ms", 0)
            log.info("resuming q=%d n=%d %s at k=%d", q, n, problem, prog.next_k)
        counter = {"chunks": 0}

        def checkpoint(p: _Progress) -> None:
            counter["chunks"] += 1
            if path is None or p.bad is not None or counter["chunks"] % config.checkpoint_every:
                return
            state["current"] = {
                "q": q,
                "n": n,
                "problem": problem,
                "algorithm": plan.name,
                "next_k": p.next_k,
                "stats": {"classes": p.classes, "prim_tests": p.prim_tests},
                "elapsed_ms": prior_ms + int((time.perf_counter() - t0) * 1000),
            }
            _write_checkpoint(path, state)
            if on_checkpoint is not None:
                on_checkpoint(state["current"])

        prog = _execute(plan, config.workers, config.chunk_size, prog, checkpoint)
        verdict = _verdict(plan, prog, prior_ms + int((time.perf_counter() - t0) * 1000))
        state["completed"].append(verdict.to_json())
        state["current"] = None
        done[key] = state["completed"][-1]
        if path is not None:
            _write_checkpoint(path, state)
        yield verdict


def targets_for(qs: Iterable[int], n: int, problem: str) -> list[tuple[int, int, str]]:
    return [(q, n, problem) for q in qs]
