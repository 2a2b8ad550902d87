"""Prime-by-prime scans: membership censuses and index statistics.

The scans walk all primes up to a limit in fixed chunks of 2**16
integers, classify each prime, and merge the per-chunk tallies in
chunk order.  Chunk boundaries are absolute (chunk k covers
[k*2**16, (k+1)*2**16)), workers receive whole chunks, and nothing in
a chunk depends on any other, so the merged report is identical
whether the chunks were processed serially or by a fork pool of any
size.  Elapsed time is measured but kept out of the report body for
the same reason.

Classification per prime p (against the survey's fixed ell) is the
same decision pipeline as ``membership.membership``: order and index
first, the structural shortcuts for index 1 and index >= ell, and the
exact trace-multiset test for the band between, but only when
p <= deep_limit; beyond that the band is reported as undecided
rather than spending near-linear work per prime.
"""

from __future__ import annotations

import multiprocessing
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .cyclotomic import multiplicative_order, trace_multiset
from .densities import ConstantEstimate, density_lower_bound, golomb_constant, hooley_constant
from .errors import CapacityError, UsageError
from .membership import davenport_constant_verified, zero_sum_subset
from .numbers import is_perfect_power, is_prime, iter_prime_blocks

_SIEVE_CAP_DEFAULT = 10**8
_CHUNK = 1 << 16
_MAX_RUNNING_POINTS = 256


def _sieve_cap() -> int:
    raw = os.environ.get("CYCLOSCOPE_MAX_SIEVE")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"CYCLOSCOPE_MAX_SIEVE must be an integer, got {raw!r}")
    return _SIEVE_CAP_DEFAULT


def sieve_primes(lo: int, hi: int) -> np.ndarray:
    """All primes in [lo, hi] as one int64 array."""
    if lo < 0 or hi < lo:
        raise UsageError(f"bad prime range [{lo}, {hi}]")
    cap = _sieve_cap()
    if hi > cap:
        raise CapacityError(
            f"sieve range ends at {hi}, cap is {cap} "
            "(set CYCLOSCOPE_MAX_SIEVE to raise it)"
        )
    blocks = list(iter_prime_blocks(max(lo, 2), hi))
    if not blocks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(blocks)


@dataclass(frozen=True)
class PrimeClassification:
    """Classification of one prime p relative to the survey's ell."""

    p: int
    ell: int
    order_r: int
    index_s: int
    status: str
    reason: str


def classify_prime(p: int, ell: int, deep_limit: int = 0) -> PrimeClassification:
    """Order, index, and membership status of one prime.

    ``deep_limit`` gates the expensive band 2 <= s < ell: primes above
    it come back "undecided" with reason deep_test_skipped.  p == ell
    is not a survey question and is rejected.
    """
    if p == ell:
        raise UsageError("classify_prime does not cover p == ell; skip it")
    r = multiplicative_order(ell, p)
    s = (p - 1) // r
    if s == 1:
        status, reason = "nonmember", "primitive_root"
    elif s >= ell:
        status, reason = "member", "index_ge_ell"
    elif p <= deep_limit:
        if zero_sum_subset(trace_multiset(p, ell)) is not None:
            status, reason = "member", "zero_sum_subset"
        else:
            status, reason = "nonmember", "no_zero_sum"
    else:
        status, reason = "undecided", "deep_test_skipped"
    return PrimeClassification(
        p=p, ell=ell, order_r=r, index_s=s, status=status, reason=reason
    )


@dataclass
class SurveyReport:
    """Merged census over all primes <= limit (p == ell excluded).

    ``running`` holds up to 256 cumulative checkpoints
    (upper_bound, members, nonmembers, undecided) for convergence
    plots.  ``elapsed_seconds`` is informational only and never
    serialized.
    """

    ell: int
    limit: int
    deep_limit: int
    total_primes: int
    member_count: int
    nonmember_count: int
    undecided_count: int
    index_histogram: dict[int, int]
    running: tuple[tuple[int, int, int, int], ...]
    references: dict[str, ConstantEstimate] = field(default_factory=dict)
    elapsed_seconds: float = 0.0


@dataclass
class GolombReport:
    """Count of primes whose residue index for a is exactly r.

    ``running`` rows are cumulative (upper_bound, matching, total).
    """

    a: int
    r: int
    limit: int
    total_primes: int
    congruent_count: int
    matching_count: int
    running: tuple[tuple[int, int, int], ...]
    reference: ConstantEstimate
    elapsed_seconds: float = 0.0


@dataclass(frozen=True)
class LemmaEntry:
    ell: int
    total_primes: int
    member_count: int
    nonmember_count: int
    undecided_count: int
    davenport_verified: bool
    violations: tuple[tuple, ...]


@dataclass
class LemmaCheckReport:
    limit: int
    entries: tuple[LemmaEntry, ...]
    passed: bool
    elapsed_seconds: float = 0.0


# Worker globals for the fork pool; set once per pool by the
# initializer so chunk tasks only carry their index.
_WORKER_ARGS: tuple | None = None


def _init_worker(kind: str, args: tuple) -> None:
    global _WORKER_ARGS
    _WORKER_ARGS = (kind, args)


def _dispatch_chunk(idx: int):
    kind, args = _WORKER_ARGS
    if kind == "survey":
        return _survey_chunk(idx, *args)
    if kind == "golomb":
        return _golomb_chunk(idx, *args)
    if kind == "lemma":
        return _lemma_chunk(idx, *args)
    raise UsageError(f"unknown chunk kind {kind!r}")


def _chunk_primes(idx: int, limit: int):
    lo = idx * _CHUNK
    hi = min(lo + _CHUNK - 1, limit)
    if hi < 2:
        return
    for block in iter_prime_blocks(max(lo, 2), hi, _CHUNK):
        yield from (int(p) for p in block)


def _survey_chunk(idx: int, ell: int, deep_limit: int, limit: int):
    members = nonmembers = undecided = 0
    hist: dict[int, int] = {}
    for p in _chunk_primes(idx, limit):
        if p == ell:
            continue
        c = classify_prime(p, ell, deep_limit)
        hist[c.index_s] = hist.get(c.index_s, 0) + 1
        if c.status == "member":
            members += 1
        elif c.status == "nonmember":
            nonmembers += 1
        else:
            undecided += 1
    return idx, members, nonmembers, undecided, hist


def _golomb_chunk(idx: int, a: int, r: int, limit: int):
    total = congruent = matching = 0
    for p in _chunk_primes(idx, limit):
        if a % p == 0:
            continue
        total += 1
        if (p - 1) % r:
            continue
        congruent += 1
        order = multiplicative_order(a % p, p)
        if order * r == p - 1:
            matching += 1
    return idx, total, congruent, matching


def _lemma_chunk(idx: int, ell: int, limit: int):
    members = nonmembers = undecided = 0
    violations: list[tuple] = []
    for p in _chunk_primes(idx, limit):
        if p == ell:
            continue
        c = classify_prime(p, ell, deep_limit=limit)
        if c.status == "member":
            members += 1
        elif c.status == "nonmember":
            nonmembers += 1
        else:
            undecided += 1
        if c.index_s >= ell and c.status != "member":
            violations.append((p, ell, c.index_s, c.status, "index_ge_ell_not_member"))
        if ell in (2, 3) and (c.status == "member") != (c.index_s >= 2):
            violations.append((p, ell, c.index_s, c.status, "small_ell_split_rule"))
        if c.status == "undecided":
            violations.append((p, ell, c.index_s, c.status, "unexpected_undecided"))
    return idx, members, nonmembers, undecided, tuple(violations)


def _run_chunks(kind: str, args: tuple, limit: int, threads: int | None):
    n_chunks = limit // _CHUNK + 1
    threads = _resolve_threads(threads)
    if threads <= 1 or n_chunks <= 1:
        _init_worker(kind, args)
        return [_dispatch_chunk(i) for i in range(n_chunks)]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(
        processes=min(threads, n_chunks),
        initializer=_init_worker,
        initargs=(kind, args),
    ) as pool:
        chunksize = max(1, n_chunks // (threads * 8))
        return list(pool.imap(_dispatch_chunk, range(n_chunks), chunksize=chunksize))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise UsageError(f"thread count must be >= 1, got {threads}")
    return threads


def _running_points(rows: list[tuple]) -> list[int]:
    """Indices of the cumulative checkpoints kept for convergence plots."""
    n = len(rows)
    step = max(1, n // _MAX_RUNNING_POINTS)
    keep = list(range(step - 1, n, step))
    if keep and keep[-1] != n - 1:
        keep.append(n - 1)
    elif not keep:
        keep = [n - 1] if n else []
    return keep


def run_survey(
    ell: int,
    limit: int,
    deep_limit: int = 0,
    threads: int | None = None,
) -> SurveyReport:
    """Census of all primes <= limit against the fixed modulus ell.

    Deterministic for fixed (ell, limit, deep_limit) regardless of
    ``threads``.  Attaches two reference enclosures: the proved lower
    bound for the member density and the primitive-root density for
    ell, both at precision 1e-6.
    """
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    if limit < 2:
        raise UsageError(f"survey limit must be >= 2, got {limit}")
    cap = _sieve_cap()
    if limit > cap:
        raise CapacityError(
            f"survey limit {limit} exceeds the sieve cap {cap} "
            "(set CYCLOSCOPE_MAX_SIEVE to raise it)"
        )
    deep_limit = max(0, min(deep_limit, limit))
    t0 = time.monotonic()
    results = _run_chunks("survey", (ell, deep_limit, limit), limit, threads)
    results.sort(key=lambda row: row[0])
    members = nonmembers = undecided = 0
    hist: dict[int, int] = {}
    running_rows = []
    for idx, m, nm, und, h in results:
        members += m
        nonmembers += nm
        undecided += und
        for s, cnt in h.items():
            hist[s] = hist.get(s, 0) + cnt
        upper = min((idx + 1) * _CHUNK - 1, limit)
        running_rows.append((upper, members, nonmembers, undecided))
    keep = _running_points(running_rows)
    running = tuple(running_rows[i] for i in keep)
    report = SurveyReport(
        ell=ell,
        limit=limit,
        deep_limit=deep_limit,
        total_primes=members + nonmembers + undecided,
        member_count=members,
        nonmember_count=nonmembers,
        undecided_count=undecided,
        index_histogram=dict(sorted(hist.items())),
        running=running,
        references=_survey_references(ell),
        elapsed_seconds=time.monotonic() - t0,
    )
    return report


def _survey_references(ell: int) -> dict[str, ConstantEstimate]:
    refs = {"member_density_lower_bound": density_lower_bound(ell, 1e-6)}
    if not is_perfect_power(ell):
        refs["primitive_root_density"] = hooley_constant(ell, 1e-6)
    return refs


def run_golomb_survey(
    a: int,
    r: int,
    limit: int,
    threads: int | None = None,
) -> GolombReport:
    """Count primes <= limit whose residue index for a is exactly r.

    The index of a mod p is (p-1)/ord_p(a); primes dividing a are
    excluded from the total.  The attached reference is the series
    enclosure of the limiting density at its default precision.
    """
    if not isinstance(a, int) or a < 2 or is_perfect_power(a):
        raise UsageError(f"golomb survey needs an integer a >= 2, not a perfect power; got {a}")
    if r < 1:
        raise UsageError(f"index r must be >= 1, got {r}")
    if limit < 2:
        raise UsageError(f"survey limit must be >= 2, got {limit}")
    cap = _sieve_cap()
    if limit > cap:
        raise CapacityError(
            f"survey limit {limit} exceeds the sieve cap {cap} "
            "(set CYCLOSCOPE_MAX_SIEVE to raise it)"
        )
    t0 = time.monotonic()
    results = _run_chunks("golomb", (a, r, limit), limit, threads)
    results.sort(key=lambda row: row[0])
    total = congruent = matching = 0
    running_rows = []
    for idx, t, c, m in results:
        total += t
        congruent += c
        matching += m
        upper = min((idx + 1) * _CHUNK - 1, limit)
        running_rows.append((upper, matching, total))
    keep = _running_points(running_rows)
    running = tuple(running_rows[i] for i in keep)
    return GolombReport(
        a=a,
        r=r,
        limit=limit,
        total_primes=total,
        congruent_count=congruent,
        matching_count=matching,
        running=running,
        reference=golomb_constant(a, r),
        elapsed_seconds=time.monotonic() - t0,
    )


def lemma_checks(
    limit: int,
    ells: tuple[int, ...] = (2, 3, 5, 7),
    threads: int | None = None,
) -> LemmaCheckReport:
    """Exhaustive consistency sweep of the structural membership facts.

    For each ell: scan every prime p <= limit (p == ell skipped) with
    the deep test always on, and record a violation if any of these
    fail: index >= ell must be a member; for ell in {2, 3} membership
    must coincide with index >= 2; nothing may remain undecided.  The
    Davenport constant backing the first rule is re-verified
    exhaustively per ell.  Expected violation count: zero.
    """
    if limit < 2:
        raise UsageError(f"limit must be >= 2, got {limit}")
    cap = _sieve_cap()
    if limit > cap:
        raise CapacityError(f"limit {limit} exceeds the sieve cap {cap}")
    for ell in ells:
        if not is_prime(ell):
            raise UsageError(f"{ell} is not prime")
    t0 = time.monotonic()
    entries = []
    all_ok = True
    for ell in ells:
        results = _run_chunks("lemma", (ell, limit), limit, threads)
        results.sort(key=lambda row: row[0])
        members = nonmembers = undecided = 0
        violations: list[tuple] = []
        for _idx, m, nm, und, v in results:
            members += m
            nonmembers += nm
            undecided += und
            violations.extend(v)
        dav = davenport_constant_verified(ell) if ell <= 7 else True
        if not dav:
            violations.append((0, ell, 0, "davenport", "davenport_constant_mismatch"))
        entry = LemmaEntry(
            ell=ell,
            total_primes=members + nonmembers + undecided,
            member_count=members,
            nonmember_count=nonmembers,
            undecided_count=undecided,
            davenport_verified=dav,
            violations=tuple(violations),
        )
        entries.append(entry)
        all_ok = all_ok and not violations
    return LemmaCheckReport(
        limit=limit,
        entries=tuple(entries),
        passed=all_ok,
        elapsed_seconds=time.monotonic() - t0,
    )
