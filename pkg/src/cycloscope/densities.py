"""Density constants as rigorous two-sided enclosures.

Everything here returns a ``ConstantEstimate``: a pair of exact
rationals lo <= hi guaranteed to bracket the target constant, together
with the truncation point and the tail bound that produced the width.
The guarantee has three ingredients and no hidden ones:

* truncated Euler products and Moebius series are evaluated in 80-bit
  extended precision (numpy longdouble) and wrapped in a counted
  rounding envelope: n floating operations on factors of known size
  cannot move the result by more than a stated multiple of the machine
  epsilon, and that multiple is added to the interval symmetrically;

* the dropped tail is bounded analytically (a 1/N integral bound for
  the products, a 4*sqrt(2)/sqrt(K) bound through phi(k) >= sqrt(k/2)
  for the series) and widened to a nearby rational;

* all remaining arithmetic (scaling by a rational correction factor,
  complementing against 1) is done on exact ``Fraction`` values.

The constants themselves:

* ``restricted_artin_product(ell)``: prod over primes q >= ell of
  (1 - 1/(q*(q-1))).  With ell = 2 this is Artin's constant; the
  complement ``density_lower_bound`` is the proved lower bound for the
  density of membership primes in the survey module.
* ``hooley_constant(a)``: the density of primes with primitive root a,
  Artin's constant times a rational correction depending on the
  squarefree part of a.
* ``golomb_constant(a, r)``: the density of primes p == 1 mod r whose
  least residue index for a is exactly r, via the Moebius series over
  squarefree k with an entangled-field doubling factor m(rk) in
  {1, 2} decided by the fundamental discriminant of Q(sqrt(a)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapacityError, InternalError, UsageError
from .numbers import (
    euler_phi,
    factorize,
    is_perfect_power,
    is_prime,
    iter_prime_blocks,
    moebius,
    phi_mu_block,
    squarefree_part,
)

PRECISION_MIN = 1e-12
PRECISION_MAX = 1e-2

# Euler products are cut at N ~= 1/precision primes; past this the
# segmented sieve run stops being a reasonable single call.
_PRODUCT_CUTOFF_CAP = 1 << 31

# Moebius series cutoff cap (phi/mu sieve window count).
_SERIES_CUTOFF_CAP = 1 << 28

_LD_EPS = float(np.finfo(np.longdouble).eps)

# 4*sqrt(2) = 5.65685...; any rational >= it keeps the tail bound valid.
_FOUR_ROOT_TWO = Fraction(5657, 1000)


def _validate_precision(precision: float) -> None:
    if not PRECISION_MIN <= precision <= PRECISION_MAX:
        raise UsageError(
            f"precision must lie in [{PRECISION_MIN:g}, {PRECISION_MAX:g}], "
            f"got {precision:g}"
        )


def longdouble_to_fraction(x) -> Fraction:
    """Exact rational value of a numpy longdouble (or float).

    Peels the mantissa in 32-bit chunks after frexp, so every binary
    format up to 128-bit quad converts exactly.
    """
    x = np.longdouble(x)
    if not np.isfinite(x):
        raise UsageError("cannot convert a non-finite value to a fraction")
    if x == 0:
        return Fraction(0)
    sign = -1 if x < 0 else 1
    m, e = np.frexp(np.abs(x))
    num = 0
    shift = 0
    while m != 0:
        m = m * np.longdouble(1 << 32)
        chunk = int(np.floor(m))
        m = m - np.longdouble(chunk)
        num = (num << 32) | chunk
        shift += 32
        if shift > 256:
            raise InternalError("longdouble mantissa did not terminate")
    return sign * num * Fraction(2) ** (int(e) - shift)


def fraction_to_decimal(value: Fraction, places: int, rounding: str = "half_even") -> str:
    """Fixed-point decimal string with controlled rounding direction."""
    scaled = value * 10**places
    if rounding == "floor":
        n = math.floor(scaled)
    elif rounding == "ceil":
        n = math.ceil(scaled)
    elif rounding == "half_even":
        n = round(scaled)
    else:
        raise UsageError(f"unknown rounding mode {rounding!r}")
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else f"{sign}{digits}"


@dataclass(frozen=True)
class ConstantEstimate:
    """A proved enclosure [lo, hi] of a real constant.

    ``truncation`` is the cutoff of the product or series that was
    actually evaluated, ``tail_bound`` the one-sided allowance covering
    both the dropped tail and the floating-point envelope (so the width
    is exactly twice it), and ``method`` records how the enclosure was
    obtained ("directed": float evaluation inside a counted error
    envelope; "rational": exact fraction arithmetic end to end).
    """

    label: str
    lo: Fraction
    hi: Fraction
    truncation: int
    tail_bound: Fraction
    method: str

    def __post_init__(self):
        if self.lo > self.hi:
            raise InternalError(f"empty enclosure for {self.label}")
        if self.hi - self.lo > 2 * self.tail_bound:
            raise InternalError(f"tail bound understates the width for {self.label}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x) if not isinstance(x, float) else Fraction.from_float(x)
        return self.lo <= x <= self.hi

    def overlaps(self, other: "ConstantEstimate") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def scaled(self, factor: Fraction, label: str) -> "ConstantEstimate":
        """Exact multiple of the enclosure by a positive rational."""
        factor = Fraction(factor)
        if factor <= 0:
            raise UsageError("scaling factor must be positive")
        return ConstantEstimate(
            label=label,
            lo=self.lo * factor,
            hi=self.hi * factor,
            truncation=self.truncation,
            tail_bound=self.tail_bound * factor,
            method=self.method,
        )

    def complement(self, label: str) -> "ConstantEstimate":
        """The enclosure of 1 - value."""
        return ConstantEstimate(
            label=label,
            lo=1 - self.hi,
            hi=1 - self.lo,
            truncation=self.truncation,
            tail_bound=self.tail_bound,
            method=self.method,
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lo": fraction_to_decimal(self.lo, 15, "floor"),
            "hi": fraction_to_decimal(self.hi, 15, "ceil"),
            "truncation": self.truncation,
            "tail_bound": fraction_to_decimal(self.tail_bound, 15, "ceil"),
            "method": self.method,
        }

    def __str__(self):
        return (
            f"{self.label}: [{fraction_to_decimal(self.lo, 12, 'floor')}, "
            f"{fraction_to_decimal(self.hi, 12, 'ceil')}]"
        )


@lru_cache(maxsize=32)
def _euler_product_core(ell_min: int, cutoff: int) -> tuple[Fraction, Fraction]:
    """Enclosure of prod over primes q in [ell_min, cutoff] of (1 - 1/(q(q-1))).

    Factors are evaluated in longdouble; q*(q-1) is exact there for
    q < 2**32, so each factor costs at most two roundings and each
    multiplication one more.  The counted envelope 3n + 8 epsilons is
    applied as a relative widening of the finite product.
    """
    prod = np.longdouble(1.0)
    n_factors = 0
    for block in iter_prime_blocks(ell_min, cutoff):
        q = block.astype(np.longdouble)
        factors = 1.0 - 1.0 / (q * (q - 1.0))
        prod = prod * np.prod(factors)
        n_factors += len(block)
    rel = Fraction.from_float((3 * n_factors + 8) * _LD_EPS)
    center = longdouble_to_fraction(prod)
    return center * (1 - rel), center * (1 + rel)


def _product_estimate(ell: int, cutoff: int) -> ConstantEstimate:
    """Finite product over [ell, cutoff] widened by the 1/cutoff tail bound.

    The dropped tail is a product of factors in (1 - 1/(q(q-1)), 1)
    whose total defect is below sum 1/(n(n-1)) = 1/cutoff, so pulling
    the lower bound down by that fraction encloses the full product.
    """
    if cutoff > _PRODUCT_CUTOFF_CAP:
        raise CapacityError(
            f"product cutoff {cutoff} exceeds the sieve cap {_PRODUCT_CUTOFF_CAP}; "
            "request a coarser precision"
        )
    lo, hi = _euler_product_core(ell, cutoff)
    lo = lo * (1 - Fraction(1, cutoff))
    return ConstantEstimate(
        label=f"restricted_euler_product_{ell}",
        lo=lo,
        hi=hi,
        truncation=cutoff,
        tail_bound=(hi - lo) / 2,
        method="directed",
    )


def restricted_artin_product(ell: int, precision: float = 1e-9) -> ConstantEstimate:
    """Enclosure of prod over primes q >= ell of (1 - 1/(q*(q-1))).

    The cutoff is ceil(1/precision), which keeps the product's width
    under the requested precision (the tail defect is below
    1/cutoff and the finite part carries only a counted rounding
    envelope).
    """
    if not is_prime(ell):
        raise UsageError(f"{ell} is not prime")
    _validate_precision(precision)
    cutoff = max(math.ceil(1 / precision), ell + 1, 100)
    est = _product_estimate(ell, cutoff)
    if est.width > Fraction.from_float(precision):
        raise InternalError(
            f"product enclosure wider than requested: {float(est.width):g}"
        )
    return est


def artin_constant(precision: float = 1e-9) -> ConstantEstimate:
    """Artin's constant prod over all primes q of (1 - 1/(q*(q-1)))."""
    return restricted_artin_product(2, precision).scaled(1, "artin_constant")


def density_lower_bound(ell: int, precision: float = 1e-9) -> ConstantEstimate:
    """Proved lower bound 1 - prod_{q >= ell} (1 - 1/(q(q-1))).

    This is the density of primes p whose index s = (p-1)/ord_p(ell)
    is at least ell; all of those are members, so the membership
    density is at least this number.
    """
    return restricted_artin_product(ell, precision).complement(
        f"density_lower_bound_{ell}"
    )


def hooley_constant(a: int, precision: float = 1e-9) -> ConstantEstimate:
    """Density of primes admitting a as a primitive root.

    Artin's constant times a rational correction: with b the (signed)
    squarefree part of a, the correction is 1 unless b == 1 mod 4, in
    which case it is 1 - mu(|b|) * prod over p | b of 1/(p*(p-1) - 1).
    Requires a outside {0, 1, -1} and not a perfect power.
    """
    if not isinstance(a, int):
        raise UsageError("a must be an integer")
    if a in (0, 1, -1) or is_perfect_power(a):
        raise UsageError(f"no primitive-root density for a = {a}")
    _validate_precision(precision)
    b = squarefree_part(a)
    if b % 4 == 1:
        correction = Fraction(1) - moebius(abs(b)) * math.prod(
            (Fraction(1, p * (p - 1) - 1) for p in factorize(abs(b))),
            start=Fraction(1),
        )
    else:
        correction = Fraction(1)
    # correction <= 1.25, so doubling the product cutoff keeps the
    # scaled width inside the request
    base = _product_estimate(2, max(math.ceil(2 / precision), 100))
    est = base.scaled(correction, f"hooley_{a}")
    if est.width > Fraction.from_float(precision):
        raise InternalError("hooley enclosure wider than requested")
    return est


def fundamental_discriminant(d: int) -> int:
    """Discriminant of the quadratic field Q(sqrt(d)).

    With d0 the signed squarefree part of d: d0 itself when
    d0 == 1 mod 4, else 4*d0.  Perfect squares have no quadratic field
    and are rejected.
    """
    if d == 0:
        raise UsageError("no quadratic field over sqrt(0)")
    d0 = squarefree_part(d)
    if d0 == 1:
        raise UsageError(f"{d} is a perfect square; Q(sqrt({d})) is not quadratic")
    return d0 if d0 % 4 == 1 else 4 * d0


def _divisor_phi_table(r: int) -> dict[int, int]:
    divisors = [1]
    for p, e in factorize(r).items():
        divisors = [d * p**k for d in divisors for k in range(e + 1)]
    return {d: euler_phi(d) for d in divisors}


def _series_core(
    r: int, disc: int | None, cutoff: int
) -> tuple[Fraction, Fraction, int]:
    """Enclosure of sum over squarefree k <= cutoff of mu(k)*m(rk)/(rk*phi(rk)).

    ``disc`` None means m == 1 throughout (the plain Moebius/phi
    series); otherwise m(rk) is 2 when rk is even and divisible by
    disc, 1 otherwise.  phi(rk) is assembled from the sieved phi(k)
    through gcd classes of k against r, keeping everything in exact
    integers until the final longdouble division.
    """
    phi_by_div = _divisor_phi_table(r)
    phi_r = phi_by_div[max(phi_by_div)]
    total = np.longdouble(0.0)
    total_abs = np.longdouble(0.0)
    n_terms = 0
    n_blocks = 0
    block = 1 << 20
    for lo in range(1, cutoff + 1, block):
        hi = min(lo + block - 1, cutoff)
        n_blocks += 1
        phik, muk = phi_mu_block(lo, hi)
        keep = muk != 0
        if not np.any(keep):
            continue
        k = np.arange(lo, hi + 1, dtype=np.int64)[keep]
        phik = phik[keep]
        muk = muk[keep]
        g = np.gcd(k, r)
        phi_rk = np.empty_like(phik)
        for gv, phi_gv in phi_by_div.items():
            sel = g == gv
            if np.any(sel):
                phi_rk[sel] = (phi_r // phi_gv) * gv * phik[sel]
        n = r * k
        if disc is None:
            m = np.ones_like(k)
        else:
            m = 1 + ((n % 2 == 0) & (n % disc == 0)).astype(np.int64)
        den = n * phi_rk
        if int(den.max()) >= 1 << 62:
            raise CapacityError("series denominators exceed exact int64 range")
        terms = (muk * m).astype(np.longdouble) / den.astype(np.longdouble)
        total = total + np.sum(terms)
        total_abs = total_abs + np.sum(np.abs(terms))
        n_terms += len(k)
    # per term: two roundings; per block: pairwise summation inside
    # (log2 of the block length) plus one sequential accumulate
    coef = 4 * (n_blocks + math.ceil(math.log2(block)) + 4)
    env_ld = total_abs * np.longdouble(coef * _LD_EPS)
    env = 2 * longdouble_to_fraction(env_ld)
    center = longdouble_to_fraction(total)
    return center - env, center + env, n_terms


@lru_cache(maxsize=64)
def golomb_constant(a: int, r: int, precision: float = 1e-3) -> ConstantEstimate:
    """Density of primes p == 1 mod r whose residue index for a is exactly r.

    The index of a mod p is (p-1)/ord_p(a); this constant is the
    density, among all primes, of those where it equals r.  Evaluated
    as the Moebius series over squarefree k of mu(k)*m(rk)/(rk*phi(rk))
    with the doubling factor m(rk) = 2 exactly when rk is even and the
    fundamental discriminant of Q(sqrt(a)) divides rk.  The truncation
    tail is bounded by 4*sqrt(2)/(r*phi(r)*sqrt(K)), which fixes the
    cutoff K from the requested precision.
    """
    if not isinstance(a, int) or a < 2:
        raise UsageError(f"golomb density needs an integer a >= 2, got {a}")
    if is_perfect_power(a):
        raise UsageError(f"golomb density is undefined for the perfect power a = {a}")
    if not isinstance(r, int) or r < 1:
        raise UsageError(f"index r must be a positive integer, got {r}")
    if r > 10**6:
        raise UsageError(f"index r capped at 10**6, got {r}")
    _validate_precision(precision)
    disc = fundamental_discriminant(a)
    phi_r = euler_phi(r)
    # tail <= precision/2 * 0.98, leaving the rest for the float envelope
    need = 0.49 * precision * r * phi_r
    cutoff = max(math.ceil((5.657 / need) ** 2), 16)
    if cutoff > _SERIES_CUTOFF_CAP:
        raise CapacityError(
            f"series cutoff {cutoff} exceeds the cap {_SERIES_CUTOFF_CAP}; "
            "request a coarser precision"
        )
    lo, hi, _ = _series_core(r, disc, cutoff)
    tail = _FOUR_ROOT_TWO / (r * phi_r * math.isqrt(cutoff))
    est = ConstantEstimate(
        label=f"golomb_{a}_{r}",
        lo=lo - tail,
        hi=hi + tail,
        truncation=cutoff,
        tail_bound=(hi - lo) / 2 + tail,
        method="directed",
    )
    if est.width > Fraction.from_float(precision):
        raise InternalError("golomb enclosure wider than requested")
    return est


def moebius_phi_series_partial(cutoff: int) -> tuple[Fraction, Fraction]:
    """Enclosure of sum over squarefree k <= cutoff of mu(k)/(k*phi(k)).

    The full series equals Artin's constant; partial sums approach it
    within 4*sqrt(2)/sqrt(cutoff), which the tests use to tie the
    series route to the product route.
    """
    if cutoff < 1:
        raise UsageError("cutoff must be >= 1")
    if cutoff > _SERIES_CUTOFF_CAP:
        raise CapacityError(f"series cutoff {cutoff} exceeds {_SERIES_CUTOFF_CAP}")
    lo, hi, _ = _series_core(1, None, cutoff)
    return lo, hi
