"""Dense univariate polynomial arithmetic over prime fields F_ell.

Coefficient arrays are little-endian (index i holds the coefficient of
X**i), stored as int64 numpy arrays with every entry reduced into
[0, ell).  The zero polynomial is the empty array.

Multiplication dispatches between a direct numpy convolution for small
operands and Kronecker substitution for large ones: coefficients are
packed into fixed-width byte slots of one huge integer, multiplied as
integers (through gmpy2 when it is installed, which is roughly 8x
faster than CPython's bignum at the sizes that matter here), and
unpacked.  Slot width is chosen from the worst-case convolution
coefficient, so the packing is exact, never heuristic.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .errors import CapacityError, UsageError
from .numbers import is_prime

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = None

_MPZ_HAS_BYTES = _mpz is not None and hasattr(_mpz(0), "to_bytes")

# Below this product of operand lengths, plain numpy convolution beats
# the fixed overhead of packing and bignum conversion.
_CONVOLVE_CUTOFF = 1 << 18

_SLOT_DTYPES = {1: "<u1", 2: "<u2", 4: "<u4", 8: "<u8"}


@functools.lru_cache(maxsize=64)
def _check_modulus(ell: int) -> None:
    if not isinstance(ell, int) or not is_prime(ell):
        raise UsageError(f"coefficient modulus must be prime, got {ell!r}")


def normalize(coeffs: np.ndarray, ell: int) -> np.ndarray:
    """Reduce mod ell and strip trailing (high-degree) zeros."""
    c = np.asarray(coeffs, dtype=np.int64) % ell
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        return np.empty(0, dtype=np.int64)
    return c[: nz[-1] + 1]


def _bigint_mul(ai: int, bi: int) -> bytes | int:
    if _mpz is None:
        return ai * bi
    return _mpz(ai) * _mpz(bi)


def mul_arrays(a: np.ndarray, b: np.ndarray, ell: int) -> np.ndarray:
    """Product of two normalized coefficient arrays, normalized."""
    n1, n2 = len(a), len(b)
    if n1 == 0 or n2 == 0:
        return np.empty(0, dtype=np.int64)
    bound = min(n1, n2) * (ell - 1) * (ell - 1)
    if n1 * n2 <= _CONVOLVE_CUTOFF and bound < 1 << 62:
        return normalize(np.convolve(a, b), ell)
    for w in (1, 2, 4, 8):
        if bound < 1 << (8 * w):
            break
    else:
        raise CapacityError(
            f"convolution coefficients near {bound} exceed 64-bit packing"
        )
    dt = _SLOT_DTYPES[w]
    ai = int.from_bytes(a.astype(dt).tobytes(), "little")
    bi = int.from_bytes(b.astype(dt).tobytes(), "little")
    nout = n1 + n2 - 1
    prod = _bigint_mul(ai, bi)
    if _MPZ_HAS_BYTES and _mpz is not None:
        pbytes = prod.to_bytes(w * nout, "little")
    else:
        pbytes = int(prod).to_bytes(w * nout, "little")
    out = np.frombuffer(pbytes, dtype=dt).astype(np.int64)
    return normalize(out, ell)


def divmod_arrays(
    num: np.ndarray, den: np.ndarray, ell: int
) -> tuple[np.ndarray, np.ndarray]:
    """Classical polynomial division of normalized arrays.

    Returns (quotient, remainder) with deg(remainder) < deg(den).
    The python-level loop runs once per quotient coefficient with a
    numpy update underneath, which is fast enough for every divisor
    this package reduces by (degrees up to a few thousand).
    """
    if len(den) == 0:
        raise UsageError("polynomial division by zero")
    dn = len(den) - 1
    if len(num) - 1 < dn:
        return np.empty(0, dtype=np.int64), num.copy()
    inv = pow(int(den[-1]), ell - 2, ell)
    r = num.copy()
    q = np.zeros(len(num) - dn, dtype=np.int64)
    for k in range(len(num) - 1, dn - 1, -1):
        c = int(r[k])
        if c:
            f = c * inv % ell
            q[k - dn] = f
            r[k - dn : k + 1] = (r[k - dn : k + 1] - f * den) % ell
    return normalize(q, ell), normalize(r[:dn], ell)


class Poly:
    """A polynomial over F_ell.

    Instances behave like values: arithmetic returns new objects and
    the coefficient array is never mutated after construction.
    """

    __slots__ = ("c", "ell")

    def __init__(self, coeffs, ell: int):
        _check_modulus(ell)
        self.ell = ell
        self.c = normalize(np.asarray(coeffs, dtype=np.int64), ell)

    @classmethod
    def _raw(cls, c: np.ndarray, ell: int) -> "Poly":
        # internal constructor for arrays already in normal form
        obj = object.__new__(cls)
        obj.c = c
        obj.ell = ell
        return obj

    @classmethod
    def zero(cls, ell: int) -> "Poly":
        return cls([], ell)

    @classmethod
    def one(cls, ell: int) -> "Poly":
        return cls([1], ell)

    @classmethod
    def x(cls, ell: int) -> "Poly":
        return cls([0, 1], ell)

    @classmethod
    def monomial(cls, exponent: int, ell: int, coefficient: int = 1) -> "Poly":
        if exponent < 0:
            raise UsageError(f"monomial exponent must be >= 0, got {exponent}")
        c = np.zeros(exponent + 1, dtype=np.int64)
        c[exponent] = coefficient
        return cls(c, ell)

    @property
    def degree(self) -> int | float:
        """Degree of the polynomial.

        The zero polynomial reports -inf, so degree comparisons and
        deg(f*g) = deg f + deg g behave without a special case; it is
        never the integer -1.
        """
        return len(self.c) - 1 if len(self.c) else -math.inf

    def is_zero(self) -> bool:
        return len(self.c) == 0

    def is_one(self) -> bool:
        return len(self.c) == 1 and self.c[0] == 1

    def leading(self) -> int:
        if self.is_zero():
            raise UsageError("the zero polynomial has no leading coefficient")
        return int(self.c[-1])

    def is_monic(self) -> bool:
        return not self.is_zero() and self.c[-1] == 1

    def coefficient(self, i: int) -> int:
        if i < 0:
            raise UsageError(f"coefficient index must be >= 0, got {i}")
        return int(self.c[i]) if i < len(self.c) else 0

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ell != self.ell:
                raise UsageError(
                    f"mixed moduli {self.ell} and {other.ell} in arithmetic"
                )
            return other
        if isinstance(other, int):
            return Poly([other], self.ell)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.ell == other.ell and np.array_equal(self.c, other.c)
        if isinstance(other, int):
            return np.array_equal(self.c, normalize(np.array([other]), self.ell))
        return NotImplemented

    def __hash__(self):
        return hash((self.ell, self.c.tobytes()))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return Poly._raw(normalize(out, self.ell), self.ell)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(normalize(-self.c, self.ell), self.ell)

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Poly._raw(mul_arrays(self.c, other.c, self.ell), self.ell)

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        q, r = divmod_arrays(self.c, other.c, self.ell)
        return Poly._raw(q, self.ell), Poly._raw(r, self.ell)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise UsageError(f"exponent must be a nonnegative int, got {n!r}")
        result = Poly.one(self.ell)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def powmod(self, n: int, modulus: "Poly") -> "Poly":
        """self**n reduced mod modulus, by square and multiply."""
        if not isinstance(n, int) or n < 0:
            raise UsageError(f"exponent must be a nonnegative int, got {n!r}")
        modulus = self._coerce(modulus)
        if modulus.degree < 1:
            raise UsageError("powmod modulus must have degree >= 1")
        result = Poly.one(self.ell)
        base = self % modulus
        while n:
            if n & 1:
                result = result * base % modulus
            n >>= 1
            if n:
                base = base * base % modulus
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            raise UsageError("cannot make the zero polynomial monic")
        lead = int(self.c[-1])
        if lead == 1:
            return self
        inv = pow(lead, self.ell - 2, self.ell)
        return Poly._raw(normalize(self.c * inv, self.ell), self.ell)

    def gcd(self, other) -> "Poly":
        """Monic greatest common divisor."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise UsageError(f"cannot take gcd with {other!r}")
        a, b = self.c, other.c
        while len(b):
            _, r = divmod_arrays(a, b, self.ell)
            a, b = b, r
        g = Poly._raw(a.copy(), self.ell)
        return g.monic() if not g.is_zero() else g

    def derivative(self) -> "Poly":
        if self.degree < 1:
            return Poly.zero(self.ell)
        d = self.c[1:] * np.arange(1, len(self.c), dtype=np.int64)
        return Poly._raw(normalize(d, self.ell), self.ell)

    def reversal(self) -> "Poly":
        """X**deg(f) * f(1/X), the coefficient array reversed.

        Sends a factorization of X**p - 1 to another one and negates
        nothing but the order of coefficients, which is why it shows up
        throughout the membership logic here.
        """
        if self.is_zero():
            raise UsageError("reversal of the zero polynomial is undefined")
        return Poly._raw(normalize(self.c[::-1], self.ell), self.ell)

    def trace(self) -> int:
        """Negative of the subleading coefficient over the leading one.

        For a monic polynomial this is the sum of its roots in a
        splitting field.
        """
        d = self.degree
        if d < 1:
            raise UsageError("trace needs degree >= 1")
        inv = pow(int(self.c[-1]), self.ell - 2, self.ell)
        return (-int(self.c[d - 1]) * inv) % self.ell

    def __call__(self, x: int) -> int:
        acc = 0
        for coef in self.c[::-1]:
            acc = (acc * x + int(coef)) % self.ell
        return acc

    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.c)

    def __repr__(self) -> str:
        return f"Poly({self.coeffs()}, ell={self.ell})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            v = int(self.c[i]) if i < len(self.c) else 0
            if v == 0:
                continue
            if i == 0:
                parts.append(str(v))
            elif i == 1:
                parts.append("X" if v == 1 else f"{v}*X")
            else:
                parts.append(f"X^{i}" if v == 1 else f"{v}*X^{i}")
        return " + ".join(parts)
