"""Density constants: enclosures, anchors, and the correction factors.

The reference digits below were frozen from an independent
high-precision run (prime-zeta series acceleration at 60 digits,
cross-checked against a direct product over primes up to 10**7)
before the tests were written.
"""

import math
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from cycloscope import (
    ConstantEstimate,
    artin_constant,
    density_lower_bound,
    fraction_to_decimal,
    fundamental_discriminant,
    golomb_constant,
    hooley_constant,
    longdouble_to_fraction,
    moebius_phi_series_partial,
    restricted_artin_product,
)
from cycloscope.errors import InternalError, UsageError

ARTIN = Fraction(Decimal("0.3739558136192022880547280543464164151116"))
ONE_MINUS_A = Fraction(Decimal("0.6260441863807977119452719456535835848884"))
ONE_MINUS_2A = Fraction(Decimal("0.2520883727615954238905438913071671697767"))
PROD_FROM_3 = Fraction(Decimal("0.7479116272384045761094561086928328302233"))
PROD_FROM_7 = Fraction(Decimal("0.9447304765116689382435235057172625223873"))
HOOLEY_5 = Fraction(Decimal("0.393637698546528724268134794048859384328"))
THREE_QUARTER_A = Fraction(Decimal("0.2804668602144017160410460407598123113337"))
FOUR_FIFTH_A = Fraction(Decimal("0.2991646508953618304437824434771331320893"))


def test_artin_constant_encloses_reference():
    for precision in (1e-4, 1e-6, 1e-9):
        est = artin_constant(precision)
        assert est.lo <= ARTIN <= est.hi
        assert est.width <= 2 * Fraction(precision)
        assert est.width <= 2 * est.tail_bound + Fraction(1, 10**14)


def test_restricted_products_enclose_references():
    assert restricted_artin_product(3, 1e-8).contains(PROD_FROM_3)
    assert restricted_artin_product(7, 1e-8).contains(PROD_FROM_7)
    assert restricted_artin_product(2, 1e-8).contains(ARTIN)


def test_restricted_product_drops_small_primes():
    # the ell = 3 product equals the full product divided by (1 - 1/2)
    b2 = restricted_artin_product(2, 1e-9)
    b3 = restricted_artin_product(3, 1e-9)
    assert b3.lo <= 2 * b2.midpoint <= b3.hi


def test_density_lower_bound_values():
    assert density_lower_bound(2, 1e-9).contains(ONE_MINUS_A)
    assert density_lower_bound(3, 1e-9).contains(ONE_MINUS_2A)
    # leading digits of the ell = 3 bound
    lo_str = str(density_lower_bound(3, 1e-9))
    assert "0.25208" in lo_str


def test_estimate_invariants():
    for est in (
        artin_constant(1e-6),
        density_lower_bound(5, 1e-6),
        hooley_constant(3, 1e-6),
        golomb_constant(2, 3, 1e-2),
    ):
        assert 0 < est.lo <= est.hi < 1
        assert est.width <= 2 * est.tail_bound + Fraction(1, 10**13)
        assert est.contains(est.midpoint)
        assert est.method == "directed"


def test_hooley_corrections():
    # squarefree part 1 mod 4 gets the correction factor, others do not
    a6 = artin_constant(1e-9)
    assert hooley_constant(2, 1e-9).contains(ARTIN)
    assert hooley_constant(3, 1e-9).contains(ARTIN)
    assert hooley_constant(6, 1e-9).contains(ARTIN)
    assert hooley_constant(5, 1e-9).contains(HOOLEY_5)
    # a = 5: squarefree part 5 = 1 mod 4, mu(5) = -1, factor 20/19
    assert hooley_constant(5, 1e-9).overlaps(a6.scaled(Fraction(20, 19), "x"))
    # a = 13: factor 1 + 1/155 = 156/155
    assert hooley_constant(13, 1e-9).overlaps(a6.scaled(Fraction(156, 155), "x"))
    # a = -3: squarefree part -3 = 1 mod 4, mu(3) = -1, factor 6/5
    assert hooley_constant(-3, 1e-9).overlaps(a6.scaled(Fraction(6, 5), "x"))
    # a = 21 = 3 * 7: mu = 1, factor 1 - 1/(5 * 41)
    assert hooley_constant(21, 1e-9).overlaps(
        a6.scaled(Fraction(204, 205), "x")
    )
    # a = -2: squarefree part -2 = 2 mod 4, no correction
    assert hooley_constant(-2, 1e-9).contains(ARTIN)


def test_hooley_rejects_degenerate_bases():
    for bad in (0, 1, -1, 4, 9, 16, 8, 27):
        with pytest.raises(UsageError):
            hooley_constant(bad)


def test_fundamental_discriminant():
    cases = {2: 8, 3: 12, 5: 5, 6: 24, 7: 28, 13: 13, 8: 8, 12: 12,
             -1: -4, -2: -8, -3: -3, -5: -20, -7: -7}
    for d, want in cases.items():
        assert fundamental_discriminant(d) == want
    for bad in (0, 1, 4, 9):
        with pytest.raises(UsageError):
            fundamental_discriminant(bad)


def test_fundamental_discriminant_is_0_or_1_mod_4():
    for d in range(-30, 31):
        if d in (0,) or (d > 0 and math.isqrt(d) ** 2 == d):
            continue
        disc = fundamental_discriminant(d)
        assert disc % 4 in (0, 1)


def test_golomb_matches_known_identities():
    a9 = artin_constant(1e-9)
    g21 = golomb_constant(2, 1, 1e-2)
    assert g21.overlaps(a9)
    g22 = golomb_constant(2, 2, 1e-3)
    assert g22.contains(THREE_QUARTER_A)
    assert g22.overlaps(a9.scaled(Fraction(3, 4), "x"))
    g32 = golomb_constant(3, 2, 1e-3)
    assert g32.contains(FOUR_FIFTH_A)
    assert g32.overlaps(a9.scaled(Fraction(4, 5), "x"))


def test_golomb_order_one_matches_hooley():
    # the r = 1 case degenerates to the primitive-root density
    g51 = golomb_constant(5, 1, 1e-2)
    assert g51.overlaps(hooley_constant(5, 1e-6))
    g61 = golomb_constant(6, 1, 1e-2)
    assert g61.overlaps(artin_constant(1e-6))


def test_golomb_width_tracks_precision():
    for precision in (1e-2, 1e-3):
        est = golomb_constant(2, 3, precision)
        assert est.width <= Fraction(Decimal(str(precision)))


def test_golomb_validation():
    with pytest.raises(UsageError):
        golomb_constant(4, 2)
    with pytest.raises(UsageError):
        golomb_constant(2, 0)
    with pytest.raises(UsageError):
        golomb_constant(2, 10**6 + 1)
    with pytest.raises(UsageError):
        golomb_constant(2, 2, 1e-15)


def test_precision_range_enforced():
    for f in (artin_constant, lambda q: density_lower_bound(3, q),
              lambda q: hooley_constant(2, q)):
        with pytest.raises(UsageError):
            f(1e-13)
        with pytest.raises(UsageError):
            f(0.5)


def test_moebius_phi_series_brackets_artin():
    for cutoff in (10**3, 10**5, 10**6):
        lo, hi = moebius_phi_series_partial(cutoff)
        assert lo <= hi
        mid = (lo + hi) / 2
        assert abs(mid - ARTIN) <= Fraction(5657, 1000) / math.isqrt(cutoff)


def test_constant_estimate_mechanics():
    est = ConstantEstimate("t", Fraction(1, 4), Fraction(1, 3), 10, Fraction(1, 20), "directed")
    assert est.width == Fraction(1, 12)
    assert est.midpoint == Fraction(7, 24)
    assert est.contains(Fraction(3, 10))
    assert not est.contains(Fraction(1, 2))
    other = ConstantEstimate("u", Fraction(1, 3), Fraction(1, 2), 10, Fraction(1, 10), "directed")
    assert est.overlaps(other)  # they share the endpoint 1/3
    far = ConstantEstimate("v", Fraction(2, 3), Fraction(3, 4), 10, Fraction(1, 20), "directed")
    assert not est.overlaps(far)

    doubled = est.scaled(2, "doubled")
    assert (doubled.lo, doubled.hi) == (Fraction(1, 2), Fraction(2, 3))
    comp = est.complement("comp")
    assert (comp.lo, comp.hi) == (Fraction(2, 3), Fraction(3, 4))

    with pytest.raises(InternalError):
        ConstantEstimate("w", Fraction(1, 2), Fraction(1, 3), 10, Fraction(1, 10), "directed")


def test_constant_estimate_to_dict_rounds_outward():
    est = ConstantEstimate("t", Fraction(1, 3), Fraction(2, 3), 7, Fraction(1, 6), "directed")
    d = est.to_dict()
    assert d["label"] == "t"
    assert Fraction(Decimal(d["lo"])) <= est.lo
    assert Fraction(Decimal(d["hi"])) >= est.hi
    assert d["truncation"] == 7
    assert d["method"] == "directed"


def test_fraction_to_decimal_modes():
    third = Fraction(1, 3)
    assert fraction_to_decimal(third, 6) == "0.333333"
    assert fraction_to_decimal(third, 6, "floor") == "0.333333"
    assert fraction_to_decimal(third, 6, "ceil") == "0.333334"
    two_thirds = Fraction(2, 3)
    assert fraction_to_decimal(two_thirds, 6) == "0.666667"
    assert fraction_to_decimal(two_thirds, 6, "floor") == "0.666666"
    assert fraction_to_decimal(Fraction(1, 2), 3) == "0.500"
    # half-even at the boundary
    assert fraction_to_decimal(Fraction(1, 8), 2) == "0.12"
    assert fraction_to_decimal(Fraction(3, 8), 2) == "0.38"
    assert fraction_to_decimal(Fraction(-1, 3), 3, "floor") == "-0.334"
    assert fraction_to_decimal(Fraction(-1, 3), 3, "ceil") == "-0.333"


def test_longdouble_to_fraction_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(50):
        x = np.longdouble(rng.uniform(1e-8, 1e8))
        frac = longdouble_to_fraction(x)
        assert np.longdouble(frac.numerator) / np.longdouble(frac.denominator) == x
    assert longdouble_to_fraction(np.longdouble(0.5)) == Fraction(1, 2)
    assert longdouble_to_fraction(np.longdouble(-0.25)) == Fraction(-1, 4)
    assert longdouble_to_fraction(np.longdouble(0)) == 0
