"""Membership of X**p - 1 in the reducible locus of the no-linear-term subring.

Inside F_ell[X] sits the subring of polynomials with no X**1 term
(equivalently, spanned by the monomials X**k for k != 1).  For a prime
p != ell, X**p - 1 always lies in that subring; the question this
module decides is whether it also factors there, i.e. whether

    X**p - 1 = g * h

with both g and h nonconstant and both missing their linear term.  The
decision reduces to the multiset of factor traces computed next door:
writing the reversal map R(f) = X**deg(f) * f(1/X), a split as above
exists iff some nonempty subset of the irreducible factors of
(X**p - 1)/(X - 1) has trace sum 0 mod ell.  Three structural
shortcuts make most primes cheap:

* p == ell: the only factor is X - 1 (to the p-th power), no subset of
  which can kill both linear coefficients, so p is never a member.
* index s == 1: a single irreducible factor of trace -1; its two
  subsets both fail, so primitive-root primes are never members.
* index s >= ell: every multiset of s >= ell elements of Z/ell has a
  nonempty zero-sum subset (the Davenport constant of Z/ell is ell,
  re-verified exhaustively in ``davenport_brute``), so such primes are
  always members.

Between those, 2 <= s < ell, the exact trace multiset is fetched and a
small subset-sum search settles the verdict, optionally with an
explicit witness pair (g, h) rebuilt from the factor oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cyclotomic import (
    ORACLE_CAP_DEFAULT,
    TraceMultiset,
    factor_oracle,
    multiplicative_order,
    trace_multiset,
)
from .errors import CapacityError, InternalError, UsageError
from .numbers import is_prime
from .polyarith import Poly

REASONS = frozenset(
    {
        "index_ge_ell",
        "zero_sum_subset",
        "primitive_root",
        "no_zero_sum",
        "self_prime",
        "deep_test_skipped",
    }
)

_MEMBER_REASONS = frozenset({"index_ge_ell", "zero_sum_subset"})
_NONMEMBER_REASONS = frozenset({"primitive_root", "no_zero_sum", "self_prime"})

_SUBSET_CAP_DEFAULT = 24


def reversal(f: Poly) -> Poly:
    """X**deg(f) * f(1/X): the coefficient sequence read backwards."""
    return f.reversal()


def trace(f: Poly) -> int:
    """Sum of the roots: minus the subleading coefficient over the leading one."""
    return f.trace()


def in_monoid_ring(f: Poly) -> bool:
    """Whether f has no X**1 term (the zero polynomial counts)."""
    return f.coefficient(1) == 0


@dataclass(frozen=True)
class ZeroSumWitness:
    """A nonempty sub-multiset of trace values summing to 0 mod ell.

    ``chosen`` lists (value, count) pairs with distinct values in
    increasing order.
    """

    ell: int
    chosen: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.chosen:
            raise InternalError("zero-sum witness must be nonempty")
        total = 0
        last = -1
        for value, count in self.chosen:
            if count < 1 or not 0 <= value < self.ell:
                raise InternalError(f"bad witness entry ({value}, {count})")
            if value <= last:
                raise InternalError("witness values must be strictly increasing")
            last = value
            total += value * count
        if total % self.ell:
            raise InternalError(f"witness sums to {total % self.ell}, not 0")

    def size(self) -> int:
        return sum(c for _, c in self.chosen)


def zero_sum_subset(traces: TraceMultiset) -> ZeroSumWitness | None:
    """First nonempty zero-sum sub-multiset in a fixed deterministic order.

    Scans trace values in increasing order and, for each reachable
    partial sum, tries successively larger counts of the current value
    before moving on.  The first combination hitting 0 is returned, so
    equal inputs always produce the same witness.  Counts above ell are
    never tried; count ell is (ell equal values already sum to 0).
    """
    ell = traces.ell
    parent: dict[int, tuple[int, int, int] | None] = {0: None}
    for value, mult in traces.as_sorted_items():
        additions: dict[int, tuple[int, int, int]] = {}
        for base in sorted(parent):
            for count in range(1, min(mult, ell) + 1):
                sm = (base + value * count) % ell
                if sm == 0:
                    # nonempty arrival at zero: unwind and report
                    chosen: dict[int, int] = {value: count}
                    node = parent[base]
                    while node is not None:
                        prev, v, c = node
                        chosen[v] = chosen.get(v, 0) + c
                        node = parent[prev]
                    return ZeroSumWitness(
                        ell=ell, chosen=tuple(sorted(chosen.items()))
                    )
                if sm not in parent and sm not in additions:
                    additions[sm] = (base, value, count)
        parent.update(additions)
    return None


@dataclass(frozen=True)
class MembershipResult:
    """Verdict, reason, and optional certificates for one prime p.

    ``reason`` is one of: index_ge_ell, zero_sum_subset (members);
    primitive_root, no_zero_sum, self_prime (nonmembers);
    deep_test_skipped (undecided, produced only by capped survey
    scans, never by ``membership`` itself).  When a witness pair is
    present its product is re-verified to be X**p - 1 and both parts
    are checked monic, nonconstant, and free of linear terms.
    """

    p: int
    ell: int
    verdict: str
    reason: str
    order_r: int | None = None
    index_s: int | None = None
    traces: TraceMultiset | None = None
    zero_sum: ZeroSumWitness | None = None
    witness: tuple[Poly, Poly] | None = None
    witness_note: str | None = None

    def __post_init__(self):
        if self.verdict not in ("member", "nonmember", "undecided"):
            raise InternalError(f"bad verdict {self.verdict!r}")
        if self.reason not in REASONS:
            raise InternalError(f"bad reason {self.reason!r}")
        expected = {
            "member": _MEMBER_REASONS,
            "nonmember": _NONMEMBER_REASONS,
            "undecided": {"deep_test_skipped"},
        }[self.verdict]
        if self.reason not in expected:
            raise InternalError(
                f"reason {self.reason!r} inconsistent with verdict {self.verdict!r}"
            )
        if self.witness is not None:
            if self.verdict != "member":
                raise InternalError("witness attached to a non-member result")
            g, h = self.witness
            target = Poly.monomial(self.p, self.ell) - 1
            if g * h != target:
                raise InternalError(f"witness product is not X**{self.p} - 1")
            for part in (g, h):
                if not part.is_monic() or part.degree < 1:
                    raise InternalError("witness parts must be monic nonconstant")
                if not in_monoid_ring(part):
                    raise InternalError("witness part has a linear term")


def _build_witness(
    p: int, ell: int, zero_sum: ZeroSumWitness, cap: int
) -> tuple[Poly, Poly]:
    """Turn a zero-sum subset of traces into an explicit split of X**p - 1.

    Pick factors realizing the chosen trace counts (first-by-canonical-
    order within each trace class), multiply the picked ones into G and
    the rest, together with X - 1, into H.  Reversal turns trace 0 into
    a vanishing linear coefficient, and monic rescaling keeps the
    product equal to X**p - 1 on the nose.  Returned with the higher
    degree part first.
    """
    factors = factor_oracle(p, ell, cap=cap)
    by_trace: dict[int, list[Poly]] = {}
    for f in factors.factors:
        by_trace.setdefault(f.trace(), []).append(f)
    picked: list[Poly] = []
    picked_ids = set()
    for value, count in zero_sum.chosen:
        pool = by_trace.get(value, [])
        if len(pool) < count:
            raise InternalError(
                f"witness wants {count} factors of trace {value}, "
                f"oracle found {len(pool)}"
            )
        for f in pool[:count]:
            picked.append(f)
            picked_ids.add(id(f))
    g_side = picked[0]
    for f in picked[1:]:
        g_side = g_side * f
    h_side = Poly.x(ell) - 1
    for f in factors.factors:
        if id(f) not in picked_ids:
            h_side = h_side * f
    g = g_side.reversal().monic()
    h = h_side.reversal().monic()
    return (g, h) if g.degree >= h.degree else (h, g)


def membership(
    p: int,
    ell: int,
    want_witness: bool = False,
    oracle_cap: int = ORACLE_CAP_DEFAULT,
) -> MembershipResult:
    """Decide whether X**p - 1 splits inside the no-linear-term subring.

    Always returns a definite verdict: the structural shortcuts cover
    p == ell, index 1, and index >= ell, and the remaining band
    2 <= s < ell is settled by the exact trace multiset (near-linear
    cost in p).  With ``want_witness`` a member additionally carries an
    explicit factor pair, provided p is within ``oracle_cap``; beyond
    the cap the verdict stands and ``witness_note`` says why the pair
    is missing.
    """
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    if p == ell:
        return MembershipResult(p=p, ell=ell, verdict="nonmember", reason="self_prime")
    r = multiplicative_order(ell, p)
    s = (p - 1) // r
    if s == 1:
        return MembershipResult(
            p=p, ell=ell, verdict="nonmember", reason="primitive_root",
            order_r=r, index_s=s,
        )
    witness = None
    witness_note = None
    if s >= ell:
        if want_witness:
            witness, witness_note = _witness_or_note(p, ell, None, oracle_cap)
        return MembershipResult(
            p=p, ell=ell, verdict="member", reason="index_ge_ell",
            order_r=r, index_s=s, witness=witness, witness_note=witness_note,
        )
    traces = trace_multiset(p, ell)
    zs = zero_sum_subset(traces)
    if zs is None:
        return MembershipResult(
            p=p, ell=ell, verdict="nonmember", reason="no_zero_sum",
            order_r=r, index_s=s, traces=traces,
        )
    if want_witness:
        witness, witness_note = _witness_or_note(p, ell, zs, oracle_cap)
    return MembershipResult(
        p=p, ell=ell, verdict="member", reason="zero_sum_subset",
        order_r=r, index_s=s, traces=traces, zero_sum=zs,
        witness=witness, witness_note=witness_note,
    )


def _witness_or_note(
    p: int, ell: int, zs: ZeroSumWitness | None, oracle_cap: int
) -> tuple[tuple[Poly, Poly] | None, str | None]:
    if p > oracle_cap:
        return None, (
            f"witness construction runs the factor oracle, capped at "
            f"p <= {oracle_cap}; the verdict itself is exact"
        )
    if zs is None:
        # index >= ell: fetch the traces from the factors themselves
        zs = zero_sum_subset(factor_oracle(p, ell, cap=oracle_cap).trace_multiset())
        if zs is None:
            raise InternalError(
                f"index >= ell but no zero-sum subset for p={p}, ell={ell}"
            )
    return _build_witness(p, ell, zs, oracle_cap), None


def brute_force_membership(
    p: int,
    ell: int,
    oracle_cap: int = ORACLE_CAP_DEFAULT,
    subset_cap: int = _SUBSET_CAP_DEFAULT,
) -> bool:
    """Decide membership by enumerating all splits of X**p - 1.

    Independent of the trace theory: factor X**p - 1 completely, then
    try every way of dividing the irreducible factors into two
    nonempty groups and test both products for a vanishing linear
    coefficient.  Only the two lowest coefficients of each product
    matter, so subsets are swept with two arrays of bottom
    coefficients built by doubling, and a subset pairs with its
    complement through index reversal.

    For p == ell the factorization is (X - 1)**p, whose k-th subset
    product has linear coefficient +-k mod ell; k and p - k can never
    both vanish mod ell = p for a proper split, so the answer is False
    without enumeration.
    """
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    if p == ell:
        return False
    factors = factor_oracle(p, ell, cap=oracle_cap)
    pool = [Poly.x(ell) - 1] + list(factors.factors)
    n = len(pool)
    if n > subset_cap:
        raise CapacityError(
            f"brute force sweeps 2**{n} subsets; capped at 2**{subset_cap}"
        )
    limit = 2 * (ell - 1) * (ell - 1)
    dtype = next(
        d for d in (np.int8, np.int16, np.int32, np.int64)
        if limit <= np.iinfo(d).max
    )
    size = 1 << n
    c0 = np.zeros(size, dtype=dtype)
    c1 = np.zeros(size, dtype=dtype)
    c0[0] = 1 % ell
    for i, f in enumerate(pool):
        b0 = f.coefficient(0)
        b1 = f.coefficient(1)
        half = 1 << i
        lo0 = c0[:half]
        lo1 = c1[:half]
        c0[half : 2 * half] = lo0 * b0 % ell
        c1[half : 2 * half] = (lo0 * b1 + lo1 * b0) % ell
    both = (c1 == 0) & (c1 == 0)[::-1]
    return bool(both[1:-1].any())


_DAVENPORT_ELL_CAP = 7


def davenport_brute(ell: int, n: int) -> bool:
    """Whether every length-n sequence over Z/ell has a nonempty zero-sum subset.

    Exhaustive: one pass per position keeps, for all ell**n sequences,
    the bitmask of sums realized by nonempty subsets; appending an
    element merges the old masks, the old masks rotated by the element,
    and the element itself.  True iff bit 0 is set everywhere at the
    end.  The table is ell**n masks, hence the documented caps.
    """
    _validate_davenport(ell, n)
    return bool((_davenport_masks(ell, n) & 1).all())


def davenport_witness(ell: int, n: int) -> tuple[int, ...] | None:
    """Lexicographically first length-n sequence with no zero-sum subset."""
    _validate_davenport(ell, n)
    masks = _davenport_masks(ell, n)
    missing = np.flatnonzero((masks & 1) == 0)
    if missing.size == 0:
        return None
    idx = int(missing[0])
    digits = []
    for _ in range(n):
        digits.append(idx % ell)
        idx //= ell
    return tuple(reversed(digits))


def davenport_constant_verified(ell: int) -> bool:
    """Confirm exhaustively that the Davenport constant of Z/ell is ell.

    Length ell must force a zero-sum subset and length ell - 1 must
    not; this is the combinatorial backbone of the index >= ell
    membership shortcut.
    """
    return davenport_brute(ell, ell) and not davenport_brute(ell, ell - 1)


def _validate_davenport(ell: int, n: int) -> None:
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    if not 1 <= n <= ell:
        raise UsageError(f"sequence length must be in [1, {ell}], got {n}")
    if ell > _DAVENPORT_ELL_CAP:
        raise CapacityError(
            f"davenport table holds ell**n masks; capped at ell <= {_DAVENPORT_ELL_CAP}"
        )


def _davenport_masks(ell: int, n: int) -> np.ndarray:
    full = (1 << ell) - 1
    m = np.arange(1 << ell, dtype=np.uint32)
    rot = np.empty((1 << ell, ell), dtype=np.uint32)
    for a in range(ell):
        rot[:, a] = ((m << a) | (m >> (ell - a))) & full
    bits = (1 << np.arange(ell, dtype=np.uint32)).astype(np.uint32)
    arr = np.zeros(1, dtype=np.uint32)
    for _ in range(n):
        arr = (arr[:, None] | rot[arr] | bits[None, :]).ravel()
    return arr
