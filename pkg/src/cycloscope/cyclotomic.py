"""Structure of X**p - 1 over F_ell: cosets, factors, and factor traces.

For distinct primes p and ell, the polynomial (X**p - 1)/(X - 1) splits
over F_ell into s = (p-1)/r distinct monic irreducibles, all of degree
r = the multiplicative order of ell mod p.  The irreducible factors
correspond to the orbits of multiplication-by-ell on (Z/p)*, and the
trace of each factor (sum of its roots) is the Gauss period attached to
its orbit, an element of F_ell.

The multiset of those s traces is the decision kernel for everything in
the membership module, and this module offers two independent ways to
get at it:

* ``method="gauss"``: reduce the indicator polynomial of the orbit of 1
  modulo the cyclotomic polynomial and split off each trace value by a
  gcd.  Works for every index s, cost is a handful of big gcds, so it
  is capped at moderate p.

* ``method="newton"``: compute the power sums of the traces mod ell
  from counts of subgroup elements summing to -1 (a closed form for the
  first two, a sorted-array intersection for the third, iterated cyclic
  convolutions after that), then recover the multiset through Newton's
  identities.  Requires s < ell (so the identities can be divided
  through), and in exchange runs in near-linear time, which is what
  makes deep survey scans feasible.

A randomized equal-degree factorization oracle, seeded deterministically
from (p, ell), provides the ground truth the fast paths are tested
against.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InternalError, UsageError
from .numbers import factorize, is_prime
from .polyarith import Poly, mul_arrays, normalize

# Default ceiling for the factorization oracle; equal-degree splitting
# over degree-(p-1) operands stops being a test tool past this size.
ORACLE_CAP_DEFAULT = 3000

# Ceiling for the gauss gcd-extraction route (degree of the modulus).
TRACE_CAP_DEFAULT = 200_000

# The newton route needs arrays of length p once s >= 4 (cyclic
# convolutions of subgroup indicators).  Beyond this the working set
# stops fitting comfortably in memory.  Overridable via environment.
_FFT_CAP_DEFAULT = 1 << 25

# For s == 3 only the subgroup element list is needed, length r.
_SUBGROUP_CAP = 1 << 27

_MAX_SPLIT_ROUNDS = 64


def _fft_cap() -> int:
    raw = os.environ.get("CYCLOSCOPE_MAX_FFT")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"CYCLOSCOPE_MAX_FFT must be an integer, got {raw!r}")
    return _FFT_CAP_DEFAULT


def _validate_pair(p: int, ell: int) -> None:
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    if p == ell:
        raise UsageError(f"p and ell must be distinct, both are {p}")


def multiplicative_order(a: int, p: int) -> int:
    """Least k >= 1 with a**k == 1 mod p, for prime p.

    Factors p - 1 and strips primes from the exponent, so the cost is
    the trial-division factorization plus O(log p) modular powers.
    """
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    a %= p
    if a == 0:
        raise UsageError(f"order of 0 mod {p} is undefined")
    if p == 2:
        return 1
    order = p - 1
    for q in factorize(p - 1):
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


@dataclass(frozen=True)
class CosetPartition:
    """Orbits of multiplication-by-ell on {1, ..., p-1}.

    ``cosets`` are sorted internally and listed in increasing order of
    their smallest element, so the orbit of 1 always comes first.
    """

    p: int
    ell: int
    r: int
    s: int
    cosets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.r * self.s != self.p - 1:
            raise InternalError(
                f"coset bookkeeping broken: {self.r}*{self.s} != {self.p} - 1"
            )


def coset_partition(p: int, ell: int, cap: int = 10_000_000) -> CosetPartition:
    """Partition {1,...,p-1} into multiplication-by-ell orbits."""
    _validate_pair(p, ell)
    if p > cap:
        raise CapacityError(f"coset partition materializes p-1 integers; {p} > {cap}")
    if p == 2:
        return CosetPartition(p=2, ell=ell, r=1, s=1, cosets=((1,),))
    r = multiplicative_order(ell, p)
    s = (p - 1) // r
    seen = np.zeros(p, dtype=bool)
    seen[0] = True
    cosets = []
    for start in range(1, p):
        if seen[start]:
            continue
        orbit = []
        c = start
        while not seen[c]:
            seen[c] = True
            orbit.append(c)
            c = c * ell % p
        cosets.append(tuple(sorted(orbit)))
    cosets.sort(key=lambda t: t[0])
    part = CosetPartition(p=p, ell=ell, r=r, s=s, cosets=tuple(cosets))
    if any(len(c) != r for c in part.cosets):
        raise InternalError(f"unequal orbit sizes for p={p}, ell={ell}")
    return part


def cyclotomic_poly(p: int, ell: int) -> Poly:
    """(X**p - 1)/(X - 1) over F_ell: the all-ones polynomial."""
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return Poly(np.ones(p, dtype=np.int64) if p > 1 else [1], ell)


@dataclass(frozen=True)
class TraceMultiset:
    """Traces of the irreducible factors of X**(p-1) + ... + 1 over F_ell.

    ``entries`` maps a residue t in [0, ell) to the number of factors
    with that trace; ``s`` is the factor count.  Two consistency facts
    are checked at construction: the multiplicities add up to s, and
    the weighted trace sum is -1 mod ell (traces of monic polynomials
    add under multiplication, and the full product has trace -1).
    """

    ell: int
    entries: dict[int, int]
    s: int

    def __post_init__(self):
        if sum(self.entries.values()) != self.s:
            raise InternalError(
                f"trace multiplicities sum to {sum(self.entries.values())}, "
                f"expected {self.s}"
            )
        weighted = sum(t * m for t, m in self.entries.items()) % self.ell
        if weighted != (-1) % self.ell:
            raise InternalError(
                f"weighted trace sum {weighted} != -1 mod {self.ell}"
            )
        if any(m <= 0 for m in self.entries.values()):
            raise InternalError("trace multiset stored a nonpositive multiplicity")

    def as_sorted_items(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.entries.items()))


def _subgroup_elements(p: int, ell: int, r: int) -> np.ndarray:
    """The subgroup generated by ell in (Z/p)*, as an int64 array.

    Built by doubling (powers [0,k) extend to [0,2k) via one vector
    multiply), so even r around 10**8 costs log r passes.
    """
    arr = np.array([1], dtype=np.int64)
    k = 1
    while k < r:
        take = min(k, r - k)
        step = pow(ell, k, p)
        arr = np.concatenate([arr, arr[:take] * step % p])
        k += take
    return arr


def _exact_cyclic_counts(prev: np.ndarray, hvec: np.ndarray, p: int) -> np.ndarray:
    """One more level of the cyclic convolution counting chain.

    Both inputs hold small nonnegative integers; the result counts, for
    each residue v mod p, the weighted number of ways to write v as
    (previous sum) + (subgroup element).  The FFT result is rounded to
    integers and then cross-checked: every entry must sit close to an
    integer and the total mass must match exactly, otherwise the
    float64 transform lost integrality and we refuse to continue.
    """
    fa = np.fft.rfft(prev.astype(np.float64))
    fb = np.fft.rfft(hvec.astype(np.float64))
    conv = np.fft.irfft(fa * fb, n=p)
    rounded = np.rint(conv)
    drift = np.max(np.abs(conv - rounded))
    out = rounded.astype(np.int64)
    if drift > 0.25 or int(out.sum()) != int(prev.sum()) * int(hvec.sum()):
        raise InternalError(
            f"cyclic convolution lost integrality at length {p} (drift {drift:.3g})"
        )
    return out


def _power_sum_residues(p: int, ell: int, r: int, kmax: int) -> list[int]:
    """Power sums of the factor traces, mod ell, for exponents 1..kmax.

    Everything reduces to counting tuples of subgroup elements summing
    to -1 mod p: with Z_k the number of (k-1)-tuples from the subgroup
    H = <ell> whose sum is -1-1*...*, precisely the identity

        (sum of trace**k over factors)  ==  p*Z_k - r**(k-1)   (mod ell)

    holds, because summing a fixed power of the Gauss periods over all
    orbits turns into a complete character-style sum over (Z/p)*.
    Z_1 = 0 and Z_2 = [r even] are closed forms, Z_3 is a sorted-array
    intersection, and each further level adds one cyclic convolution of
    the running count vector (reduced mod ell, which is all that
    survives) with the subgroup indicator.
    """
    out = []
    H = None
    hvec = None
    level = None  # count vector for (k-1)-tuples, reduced mod ell
    for k in range(1, kmax + 1):
        if k == 1:
            z = 0
        elif k == 2:
            z = 1 if r % 2 == 0 else 0
        else:
            if H is None:
                if r > _SUBGROUP_CAP:
                    raise CapacityError(
                        f"subgroup of order {r} exceeds the materialization cap"
                    )
                H = np.sort(_subgroup_elements(p, ell, r))
            if k == 3:
                targets = (p - 1 - H) % p
                pos = np.searchsorted(H, targets)
                pos[pos == len(H)] = 0
                z = int(np.count_nonzero(H[pos] == targets))
            else:
                if hvec is None:
                    if p > _fft_cap():
                        raise CapacityError(
                            f"trace extraction at this depth needs length-{p} "
                            f"transforms; cap is {_fft_cap()} "
                            "(raise CYCLOSCOPE_MAX_FFT to override)"
                        )
                    hvec = np.zeros(p, dtype=np.int64)
                    hvec[H] = 1
                if level is None:
                    # counts of ordered pairs from H by sum mod p
                    level = _exact_cyclic_counts(hvec, hvec, p)
                else:
                    level = _exact_cyclic_counts(level % ell, hvec, p)
                z = int(level[(p - 1 - H) % p].sum())
        out.append((p * z - pow(r, k - 1, ell)) % ell)
    return out


def _multiset_from_power_sums(p: int, ell: int, r: int, s: int) -> dict[int, int]:
    """Exact trace multiset via Newton's identities, valid for s < ell.

    The s traces live in F_ell, so their first s power sums mod ell
    determine the elementary symmetric functions (divisions by 1..s are
    invertible when s < ell), hence the monic degree-s polynomial whose
    root multiset is exactly the multiset of traces.  Roots are then
    peeled off by synthetic division over F_ell.
    """
    psums = _power_sum_residues(p, ell, r, s)
    e = [1]
    for k in range(1, s + 1):
        acc = 0
        sign = 1
        for i in range(1, k + 1):
            acc += sign * e[k - i] * psums[i - 1]
            sign = -sign
        e.append(acc * pow(k, ell - 2, ell) % ell)
    # monic polynomial with the traces as roots, high coefficient first
    coeffs = [1]
    sign = -1
    for k in range(1, s + 1):
        coeffs.append(sign * e[k] % ell)
        sign = -sign
    entries: dict[int, int] = {}
    work = coeffs
    for t in range(ell):
        while len(work) > 1:
            # synthetic division by (X - t); remainder is the value at t
            rem = 0
            quot = []
            for c in work:
                rem = (rem * t + c) % ell
                quot.append(rem)
            if quot[-1] != 0:
                break
            entries[t] = entries.get(t, 0) + 1
            work = quot[:-1]
        if len(work) == 1:
            break
    if sum(entries.values()) != s:
        raise InternalError(
            f"trace polynomial for p={p}, ell={ell} did not split over F_{ell}"
        )
    return entries


def _multiset_by_gauss_periods(p: int, ell: int, r: int, s: int) -> dict[int, int]:
    """Exact trace multiset via the orbit-indicator gcd extraction.

    Let u0 be the sum of X**c over the orbit of 1, reduced modulo the
    cyclotomic polynomial.  Modulo each irreducible factor, u0 is
    congruent to that factor's Gauss period, i.e. to its trace, a
    scalar.  So gcd(Phi, u0 - t) collects precisely the factors with
    trace t, and its degree divided by r is the multiplicity.
    """
    phi = cyclotomic_poly(p, ell)
    orbit = _subgroup_elements(p, ell, r)
    u = np.zeros(p, dtype=np.int64)
    u[orbit] = 1
    u0 = Poly(u, ell) % phi
    entries: dict[int, int] = {}
    remaining = s
    for t in range(ell):
        if remaining == 0:
            break
        g = phi.gcd(u0 - t)
        d = g.degree
        if d > 0:
            if d % r:
                raise InternalError(
                    f"gauss extraction got degree {d} not divisible by r={r}"
                )
            entries[t] = d // r
            remaining -= d // r
    if remaining:
        raise InternalError(f"gauss extraction missed {remaining} factors")
    return entries


def trace_multiset(
    p: int,
    ell: int,
    method: str = "auto",
    cap: int = TRACE_CAP_DEFAULT,
) -> TraceMultiset:
    """The multiset of factor traces of the degree-(p-1) cyclotomic over F_ell.

    ``method`` chooses the extraction route: "gauss" (gcd-based, any
    index, needs p <= cap), "newton" (power sums, needs index < ell),
    or "auto" to pick whichever applies.  The two routes are
    independent implementations of the same value and are held to
    agreement in the test suite.
    """
    _validate_pair(p, ell)
    r = multiplicative_order(ell, p)
    s = (p - 1) // r
    if method not in ("auto", "gauss", "newton"):
        raise UsageError(f"unknown trace extraction method {method!r}")
    if s == 1:
        # single irreducible factor with trace -1
        return TraceMultiset(ell=ell, entries={(-1) % ell: 1}, s=1)
    if method == "auto":
        method = "newton" if s < ell else "gauss"
    if method == "newton":
        if s >= ell:
            raise UsageError(
                f"newton trace extraction needs index < ell, got s={s}, ell={ell}"
            )
        entries = _multiset_from_power_sums(p, ell, r, s)
    else:
        if p > cap:
            raise CapacityError(
                f"gauss trace extraction works modulo a degree-{p - 1} "
                f"polynomial; capped at p <= {cap}"
            )
        entries = _multiset_by_gauss_periods(p, ell, r, s)
    return TraceMultiset(ell=ell, entries=entries, s=s)


@dataclass(frozen=True)
class FactorList:
    """The irreducible factors of the degree-(p-1) cyclotomic over F_ell."""

    p: int
    ell: int
    r: int
    factors: tuple[Poly, ...]

    def trace_multiset(self) -> TraceMultiset:
        entries: dict[int, int] = {}
        for f in self.factors:
            t = f.trace()
            entries[t] = entries.get(t, 0) + 1
        return TraceMultiset(ell=self.ell, entries=entries, s=len(self.factors))


def _oracle_seed(p: int, ell: int) -> int:
    """Fixed 64-bit mix of (p, ell) seeding the oracle's generator.

    splitmix64-style finalizer over the two inputs; published here so
    reported seeds can be reproduced exactly.
    """
    mask = (1 << 64) - 1
    x = (p * 0x9E3779B97F4A7C15 ^ ell * 0xBF58476D1CE4E5B9) & mask
    x ^= x >> 30
    x = x * 0xBF58476D1CE4E5B9 & mask
    x ^= x >> 27
    x = x * 0x94D049BB133111EB & mask
    x ^= x >> 31
    return x


def _cyclic_mul(a: np.ndarray, b: np.ndarray, p: int, ell: int) -> np.ndarray:
    """Product of two length-p coefficient vectors modulo X**p - 1."""
    prod = mul_arrays(normalize(a, ell), normalize(b, ell), ell)
    out = np.zeros(p, dtype=np.int64)
    out[: min(len(prod), p)] = prod[:p]
    if len(prod) > p:
        tail = prod[p:]
        out[: len(tail)] = (out[: len(tail)] + tail) % ell
    return out


def _frobenius_power(arr: np.ndarray, p: int, ell: int, k: int) -> np.ndarray:
    """Apply X -> X**(ell**k) to a vector mod X**p - 1.

    Raising to the ell-th power is coefficientwise trivial over F_ell,
    so the whole map is the permutation j -> j*ell**k of exponents.
    """
    m = pow(ell, k, p)
    idx = np.arange(p, dtype=np.int64) * m % p
    out = np.zeros_like(arr)
    out[idx] = arr
    return out


def _norm_to_base_field(u: np.ndarray, p: int, ell: int, r: int) -> np.ndarray:
    """u ** (1 + ell + ... + ell**(r-1)) modulo X**p - 1.

    Classic doubling chain: if c_k denotes u to the partial geometric
    sum of length k, then c_{2k} = c_k * Frob^k(c_k) and
    c_{k+1} = u * Frob(c_k).  Frobenius powers are permutations here,
    so the whole norm costs O(log r) cyclic multiplications instead of
    a length-(r log ell) square-and-multiply ladder.
    """
    c = u.copy()
    k = 1
    for bit in bin(r)[3:]:
        c = _cyclic_mul(c, _frobenius_power(c, p, ell, k), p, ell)
        k *= 2
        if bit == "1":
            c = _cyclic_mul(u, _frobenius_power(c, p, ell, 1), p, ell)
            k += 1
    return c


def _trace_map(u: np.ndarray, p: int, ell: int, r: int) -> np.ndarray:
    """u + u**2 + u**4 + ... + u**(2**(r-1)) mod X**p - 1, for ell = 2."""
    t = u.copy()
    k = 1
    for bit in bin(r)[3:]:
        t = (t + _frobenius_power(t, p, ell, k)) % ell
        k *= 2
        if bit == "1":
            t = (u + _frobenius_power(t, p, ell, 1)) % ell
            k += 1
    return t


def factor_oracle(p: int, ell: int, cap: int = ORACLE_CAP_DEFAULT) -> FactorList:
    """Full factorization of the degree-(p-1) cyclotomic over F_ell.

    Equal-degree splitting with randomness seeded deterministically
    from (p, ell): every round draws one random vector u, pushes it
    through the half-order power map (odd ell) or the additive trace
    map (ell = 2) once modulo X**p - 1, and gcds the result against
    each not-yet-split piece.  All factors are known a priori to have
    degree r, so a piece is finished exactly when its degree is r.
    The returned factors are sorted by coefficient tuple and their
    product is re-verified against the cyclotomic polynomial.
    """
    _validate_pair(p, ell)
    if p > cap:
        raise CapacityError(f"factor oracle capped at p <= {cap}, got {p}")
    r = multiplicative_order(ell, p)
    s = (p - 1) // r
    phi = cyclotomic_poly(p, ell)
    if s == 1:
        return FactorList(p=p, ell=ell, r=r, factors=(phi,))
    rng = np.random.Generator(np.random.PCG64(_oracle_seed(p, ell)))
    work = [phi]
    done: list[Poly] = []
    for _round in range(_MAX_SPLIT_ROUNDS):
        if not work:
            break
        u = rng.integers(0, ell, size=p, dtype=np.int64)
        if ell == 2:
            v = _trace_map(u, p, ell, r)
            w = Poly(v, ell)
        else:
            n = _norm_to_base_field(u, p, ell, r)
            # n is a unit scalar modulo every factor coprime to u, so a
            # short ladder finishes the half-order exponent
            e = (ell - 1) // 2
            v = n
            for _ in range(e - 1):
                v = _cyclic_mul(v, n, p, ell)
            w = Poly(v, ell) - 1
        next_work = []
        for c in work:
            g = c.gcd(w % c)
            d = g.degree
            if 0 < d < c.degree:
                for piece in (g, c // g):
                    if piece.degree == r:
                        done.append(piece)
                    else:
                        next_work.append(piece)
            else:
                next_work.append(c)
        work = next_work
    if work:
        raise InternalError(
            f"splitting stalled for p={p}, ell={ell}, "
            f"seed={_oracle_seed(p, ell):#018x}"
        )
    done.sort(key=lambda f: f.coeffs())
    product = done[0]
    for f in done[1:]:
        product = product * f
    if product != phi or len(done) != s:
        raise InternalError(f"oracle factorization inconsistent for p={p}, ell={ell}")
    return FactorList(p=p, ell=ell, r=r, factors=tuple(done))


def is_irreducible(f: Poly) -> bool:
    """Irreducibility over F_ell by the Frobenius fixed-point criterion.

    f of degree n is irreducible iff X**(ell**n) == X mod f and, for
    each prime q | n, X**(ell**(n/q)) - X is coprime to f.  Iterates
    the Frobenius n times, checkpointing at the needed depths; fine for
    the moderate degrees this package tests, quadratic beyond them.
    """
    n = f.degree
    if not f.is_monic() or n < 1:
        raise UsageError("irreducibility test expects a monic nonconstant input")
    if n == 1:
        return True
    ell = f.ell
    checkpoints = {n // q for q in factorize(n)}
    x = Poly.x(ell)
    frob = x
    for depth in range(1, n + 1):
        frob = frob.powmod(ell, f)
        if depth in checkpoints:
            if not f.gcd(frob - x).is_one():
                return False
    return frob == x
