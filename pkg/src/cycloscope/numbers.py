"""Elementary number theory helpers.

Everything here is deterministic.  Primality testing uses the
Miller-Rabin bases that are known to be exact for every 64-bit
integer, so there is no "probable prime" caveat anywhere in the
package.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import UsageError

# Witnesses that make Miller-Rabin deterministic below 3.3 * 10**24
# (Sorenson and Webster), which covers everything we accept.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MAX_N = 2**63 - 1


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**63."""
    if n < 0 or n > _MAX_N:
        raise UsageError(f"is_prime expects 0 <= n < 2**63, got {n}")
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array, via a plain sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def iter_prime_blocks(lo: int, hi: int, block: int = 1 << 20):
    """Yield int64 arrays of the primes in [lo, hi], block by block.

    Segmented so that hi can be large (10**9 and beyond) without a
    full-range sieve in memory.  Blocks arrive in increasing order.
    """
    if lo > hi:
        return
    lo = max(lo, 2)
    base = primes_upto(math.isqrt(hi))
    start = lo
    while start <= hi:
        stop = min(start + block - 1, hi)
        seg = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            seg[first - start :: p] = False
        primes = np.nonzero(seg)[0].astype(np.int64) + start
        if len(primes):
            yield primes
        start = stop + 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}.

    Trial division.  Intended for the sizes that show up here
    (orders of elements mod p with p up to a few 10**9), where the
    cofactor after removing small primes is prime or 1 almost always.
    """
    if n < 1:
        raise UsageError(f"factorize expects n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    # wheel mod 30 offsets
    offsets = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n:
        if n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        else:
            f += offsets[i]
            i = (i + 1) % 8
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise UsageError(f"euler_phi expects n >= 1, got {n}")
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def moebius(n: int) -> int:
    if n < 1:
        raise UsageError(f"moebius expects n >= 1, got {n}")
    mu = 1
    for _, e in factorize(n).items():
        if e > 1:
            return 0
        mu = -mu
    return mu


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor d of |n| with n/d a perfect square.

    Keeps the sign of n, so squarefree_part(-12) == -3.
    """
    if n == 0:
        raise UsageError("squarefree_part is undefined at 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    part = 1
    for p, e in factorize(n).items():
        if e % 2:
            part *= p
    return sign * part


def is_perfect_power(n: int) -> bool:
    """Whether n == m**k for integers m and k >= 2, sign respected.

    -8 qualifies (exponent 3), -4 does not: a negative number is a
    perfect power only through odd exponents.  0, 1 and -1 count as
    perfect powers.  Checking prime exponents suffices.
    """
    if n in (-1, 0, 1):
        return True
    a = abs(n)
    for k in primes_upto(a.bit_length()):
        k = int(k)
        if n < 0 and k == 2:
            continue
        root = round(a ** (1.0 / k))
        for cand in (root - 1, root, root + 1):
            if cand >= 2 and cand**k == a:
                return True
    return False


def phi_mu_block(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Euler phi and Moebius mu for every integer in [lo, hi].

    Returns (phi, mu) as int64 arrays of length hi - lo + 1, computed
    with a segmented sieve so a window high up (say around 10**7) costs
    memory proportional to the window, not to hi.
    """
    if lo < 1 or hi < lo:
        raise UsageError(f"phi_mu_block expects 1 <= lo <= hi, got [{lo}, {hi}]")
    n = hi - lo + 1
    phi = np.arange(lo, hi + 1, dtype=np.int64)
    mu = np.ones(n, dtype=np.int64)
    remaining = phi.copy()
    for p in primes_upto(math.isqrt(hi)):
        p = int(p)
        first = ((lo + p - 1) // p) * p
        if first > hi:
            continue
        idx = np.arange(first - lo, n, p)
        phi[idx] -= phi[idx] // p
        mu[idx] = -mu[idx]
        remaining[idx] //= p
        # strip all remaining powers of p so the large-prime pass below
        # sees either 1 or a single prime > sqrt(hi); each deeper power
        # only touches the (geometrically shrinking) still-divisible set
        ex = idx[remaining[idx] % p == 0]
        if ex.size:
            mu[ex] = 0
            while ex.size:
                remaining[ex] //= p
                ex = ex[remaining[ex] % p == 0]
    big = remaining > 1
    phi[big] -= phi[big] // remaining[big]
    mu[big] = -mu[big]
    if lo == 1:
        phi[0] = 1
        mu[0] = 1
    return phi, mu
