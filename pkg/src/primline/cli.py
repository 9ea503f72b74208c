"""primline command line: sieve, verify, bounds, report.

Exit codes: 0 success, 1 a determination failed or a result differs from
its fixture, 2 usage error.  Defaults may be set through PRIMLINE_*
environment variables; explicit flags win.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import os
import sys
from collections import defaultdict

import numpy as np

from . import charsum, fixtures, sieve
from . import field as fld
from .arith import prime_power_decompose
from .search import CampaignConfig, CheckpointMismatch, Verdict, run_campaign

log = logging.getLogger("primline")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
BYTES_PER_ELEMENT = 12  # exp, log and zech tables, int32 each


class UsageError(Exception):
    pass


def _env(name: str, default):
    raw = os.environ.get(f"PRIMLINE_{name}")
    if raw is None:
        return default
    return type(default)(raw) if default is not None else raw


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise UsageError(f"range must look like A..B, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def resolve_qs(qs: list[str] | None, rng: str | None) -> list[int]:
    """Prime powers named by --q (repeatable, comma lists allowed) and --range."""
    out: set[int] = set()
    for item in qs or []:
        for tok in item.split(","):
            try:
                q = int(tok)
            except ValueError:
                raise UsageError(f"--q expects integers, got {tok!r}") from None
            if prime_power_decompose(q) is None:
                raise UsageError(f"{q} is not a prime power")
            out.add(q)
    if rng:
        lo, hi = parse_range(rng)
        out.update(q for q in range(max(lo, 2), hi + 1) if prime_power_decompose(q) is not None)
    if not out:
        raise UsageError("no targets: give --q or --range")
    return sorted(out)


def _open_out(path: str | None):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w")


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


# ---------------------------------------------------------------------------


def _diff(name: str, got: set[int], expected: list[int]) -> bool:
    exp = set(expected)
    extra, missing = sorted(got - exp), sorted(exp - got)
    print(f"{name}: {len(got)} survivors, fixture {len(exp)}, +{len(extra)} -{len(missing)}", file=sys.stderr)
    if extra:
        print(f"  not in fixture: {extra[:20]}{' ...' if len(extra) > 20 else ''}", file=sys.stderr)
    if missing:
        print(f"  missing: {missing[:20]}{' ...' if len(missing) > 20 else ''}", file=sys.stderr)
    return not extra and not missing


def _cubic_record(q: int, r_max: int) -> dict:
    """Which refined criterion (if any) removes q, as a JSON record."""
    for variant in ("k2", "k6"):
        if (variant == "k2" and q % 2 == 0) or (variant == "k6" and q % 6 != 1):
            continue
        for r in range(r_max + 1):
            data = sieve.lemc_data(q, variant, r)
            if data is not None and sieve.lemc_criterion(data, variant):
                return {"q": q, "n": 3, "passed": True, "variant": variant, "partition": data.partition.to_json()}
    return {"q": q, "n": 3, "passed": False, "partition": None}


def cmd_sieve(args) -> int:
    if args.mode == "cubic-refine":
        candidates = fixtures.load_fixture("cubic_146", args.fixtures)
        records = [_cubic_record(q, args.r_max) for q in candidates]
        got = {rec["q"] for rec in records if not rec["passed"]}
        expected = fixtures.load_fixture("cubic_82", args.fixtures)
    else:
        scan = sieve.quartic_scan(args.t_max, args.r_max, args.workers)
        got = scan.survivors
        print(f"quartic: cutoff {scan.cutoff}, {scan.scanned} prime powers, "
              f"{len(scan.first_pass)} after the r=0 pass", file=sys.stderr)
        records = [{"q": q, "n": 4, "passed": False, "partition": None} for q in sorted(got)]
        expected = fixtures.load_fixture("e4", args.fixtures)
    with _open_out(args.out) as fh:
        fh.writelines(json.dumps(rec, sort_keys=True) + "\n" for rec in records)
    return EXIT_OK if _diff(args.mode, got, expected) else EXIT_FAIL


def cmd_verify(args) -> int:
    qs = resolve_qs(args.q, args.range)
    config = CampaignConfig(
        targets=[(q, args.degree, args.problem) for q in qs],
        workers=args.workers,
        checkpoint_path=args.checkpoint,
        max_order=args.mem_budget // BYTES_PER_ELEMENT,
        cache_dir=args.cache_dir,
    )
    failed = 0
    with _open_out(args.out) as fh:
        for v in run_campaign(config):
            fh.write(v.dumps() + "\n")
            fh.flush()
            if v.status == "unknown":
                failed += 1
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bounds(args) -> int:
    qs = resolve_qs(args.q, args.range)
    n = args.degree
    for q in qs:
        if q**n > args.cap:
            raise UsageError(f"q={q}, n={n}: field order {q**n} exceeds the exhaustive cap {args.cap}")
    ok = True
    rng = np.random.default_rng(args.seed)
    with _open_out(args.out) as fh:

        def emit(record: dict, passed: bool) -> None:
            nonlocal ok
            ok &= passed
            fh.write(json.dumps(record, sort_keys=True) + "\n")

        for q in qs:
            ctx = fld.field_for_q(q, n)
            rep = charsum.verify_katz(ctx, args.cap)
            emit(rep.to_json(), rep.passed)
            gens = charsum._generating_reps(ctx)
            if n == 3:
                rep = charsum.verify_cubic_bound(ctx, args.cap, seed=args.seed)
                emit(rep.to_json(), rep.passed)
                tu = charsum.tu_decomposition(ctx, int(gens[0]))
                tu_ok = (
                    tu.T_distinct == (q - 1) * (q * q - q + 1)
                    and tu.U_size == 2 * q * (q - 1)
                    and tu.U1_size == q * (q - 1)
                    and tu.T0_distinct == (q - 1) ** 2 * q
                    and tu.T0_avoids_fq
                    and tu.u1_u_1_disjoint
                    and tu.u_is_union
                )
                emit({"q": q, "n": n, "check": "tu", "pass": tu_ok, **tu.__dict__}, tu_ok)
            parts = list(charsum.enumerate_partitions(q, n))
            bad = 0
            for _ in range(args.samples):
                beta = int(rng.integers(0, ctx.N))
                gamma = int(rng.choice(gens))
                for part in parts:
                    bad += not charsum.verify_sieve_inequalities(ctx, beta, gamma, part).passed
            emit(
                {"q": q, "n": n, "check": "sieve_inequalities", "pass": bad == 0,
                 "pairs": args.samples, "partitions": len(parts), "failures": bad},
                bad == 0,
            )
    return EXIT_OK if ok else EXIT_FAIL


def _read_verdicts(paths: list[str]) -> list[Verdict]:
    streams = [open(p) for p in paths] if paths else [sys.stdin]
    out: dict[tuple, Verdict] = {}
    try:
        for fh in streams:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    v = Verdict.loads(line)
                except (ValueError, KeyError, TypeError) as exc:
                    raise UsageError(f"{getattr(fh, 'name', '<stdin>')}:{lineno}: malformed verdict ({exc})") from None
                out.setdefault(v.key, v)
    finally:
        for fh in streams:
            if fh is not sys.stdin:
                fh.close()
    return sorted(out.values(), key=lambda v: (v.n, v.problem, v.q))


REPORT_FIELDS = ["n", "problem", "q_lo", "q_hi", "count", "member", "nonmember", "unknown",
                 "min_ms", "avg_ms", "max_ms"]


def summarize(verdicts: list[Verdict], bin_width: int) -> list[dict]:
    bins: dict[tuple, list[Verdict]] = defaultdict(list)
    for v in verdicts:
        lo = (v.q // bin_width) * bin_width
        bins[(v.n, v.problem, lo)].append(v)
    rows = []
    for (n, problem, lo), vs in sorted(bins.items()):
        ms = [v.elapsed_ms for v in vs]
        tally = {s: sum(v.status == s for v in vs) for s in ("member", "nonmember", "unknown")}
        rows.append({
            "n": n, "problem": problem, "q_lo": lo, "q_hi": lo + bin_width, "count": len(vs), **tally,
            "min_ms": min(ms), "avg_ms": round(sum(ms) / len(ms), 1), "max_ms": max(ms),
        })
    return rows


def cmd_report(args) -> int:
    rows = summarize(_read_verdicts(args.inputs), args.bin_width)
    with _open_out(args.out) as fh:
        w = csv.DictWriter(fh, fieldnames=REPORT_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--fixtures", default=_env("FIXTURES", None),
                        help="fixture directory (default: packaged data; env PRIMLINE_FIXTURES)")
    common.add_argument("--workers", type=_positive, default=_env("WORKERS", 1),
                        help="worker count (env PRIMLINE_WORKERS, default %(default)s)")
    common.add_argument("-v", "--verbose", action="store_true")

    targets = argparse.ArgumentParser(add_help=False)
    targets.add_argument("--q", action="append", help="prime power; repeatable or comma separated")
    targets.add_argument("--range", help="all prime powers in A..B inclusive")
    targets.add_argument("--degree", type=int, choices=(3, 4), default=3, help="extension degree (default %(default)s)")

    p = argparse.ArgumentParser(prog="primline", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", parents=[common], help="run a sieve pipeline and diff it against its fixture")
    s.add_argument("mode", choices=("cubic-refine", "quartic"))
    s.add_argument("--t-max", type=_nonneg, default=_env("T_MAX", 4), help="max core primes (default %(default)s)")
    s.add_argument("--r-max", type=_nonneg, default=None,
                   help="max special primes (default 2 for cubic-refine, 4 for quartic)")
    s.set_defaults(func=cmd_sieve)

    v = sub.add_parser("verify", parents=[common, targets], help="decide membership exhaustively")
    v.add_argument("--problem", choices=("line", "translate"), default="line", help="(default %(default)s)")
    v.add_argument("--checkpoint", default=_env("CHECKPOINT", None), help="checkpoint file (env PRIMLINE_CHECKPOINT)")
    v.add_argument("--mem-budget", type=_positive, default=_env("MEM_BUDGET", fld.DEFAULT_MAX_ORDER * BYTES_PER_ELEMENT),
                   help="bytes allowed for field tables (env PRIMLINE_MEM_BUDGET, default %(default)s)")
    v.add_argument("--cache-dir", default=_env("CACHE_DIR", None), help="field table cache (env PRIMLINE_CACHE_DIR)")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", parents=[common, targets], help="check character sum bounds numerically")
    b.add_argument("--cap", type=_positive, default=_env("BOUNDS_CAP", charsum.DEFAULT_EXHAUSTIVE_CAP),
                   help="largest field order examined (default %(default)s)")
    b.add_argument("--samples", type=_positive, default=20, help="(beta, gamma) pairs per q (default %(default)s)")
    b.add_argument("--seed", type=int, default=0, help="(default %(default)s)")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("report", parents=[common], help="summarize verdict JSON lines as CSV")
    r.add_argument("inputs", nargs="*", help="verdict files (default: stdin)")
    r.add_argument("--bin-width", type=_positive, default=100, help="q bin width (default %(default)s)")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command == "sieve" and args.r_max is None:
        args.r_max = 2 if args.mode == "cubic-refine" else 4
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"primline: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (fixtures.FixtureError, CheckpointMismatch) as exc:
        print(f"primline: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
