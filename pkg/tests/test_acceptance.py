"""Acceptance suite: one test per shipped guarantee, stated tolerances.

Each test prints one line with the measured numbers; run with -v to get
a pass/fail line per criterion.  Frozen digits below come from an
independent high-precision run (prime-zeta acceleration, cross-checked
against a direct product over primes up to 10**7 with a 1/N tail
bracket) performed before this suite was written.
"""

import json
import subprocess
import sys
import time
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from cycloscope import (
    Poly,
    artin_constant,
    brute_force_membership,
    davenport_constant_verified,
    density_lower_bound,
    factor_oracle,
    golomb_constant,
    hooley_constant,
    lemma_checks,
    membership,
    multiplicative_order,
    primes_upto,
    run_golomb_survey,
    run_survey,
    trace_multiset,
)
from cycloscope.errors import CapacityError
from cycloscope.reports import survey_dict, to_json_text

ARTIN = Fraction(Decimal("0.3739558136192022880547280543464164151116"))
ONE_MINUS_A = Fraction(Decimal("0.6260441863807977119452719456535835848884"))
ONE_MINUS_2A = Fraction(Decimal("0.2520883727615954238905438913071671697767"))

SWEEP_LIMIT = 3000
SWEEP_ELLS = (2, 3, 5, 7)


@pytest.fixture(scope="session")
def artin_1e9():
    return artin_constant(1e-9)


@pytest.fixture(scope="session")
def dual_route_sweep():
    """One pass over p <= 3000, ell in {2,3,5,7}: both comparisons at once.

    For each pair the fast verdict is checked against the subset brute
    force; where the subset table would need more than 2**24 rows the
    brute force refuses, and the verdict is instead certified by an
    explicit verified split (those primes all have index past the
    zero-sum threshold, so a split must exist and is checked exactly).
    The trace multiset is compared against the factor oracle whenever
    the index is at least 2.
    """
    t0 = time.monotonic()
    verdict_mismatches = []
    trace_mismatches = []
    certified = []
    pairs = trace_pairs = 0
    for p in primes_upto(SWEEP_LIMIT).tolist():
        for ell in SWEEP_ELLS:
            if p == ell:
                continue
            pairs += 1
            res = membership(p, ell)
            fast = res.verdict == "member"
            try:
                slow = brute_force_membership(p, ell)
                if fast != slow:
                    verdict_mismatches.append((p, ell))
            except CapacityError:
                wit = membership(p, ell, want_witness=True)
                # the witness product is re-verified at construction,
                # so its presence certifies the membership verdict
                if not (fast and wit.witness is not None):
                    verdict_mismatches.append((p, ell))
                certified.append((p, ell))
            s = (p - 1) // multiplicative_order(ell, p)
            if s >= 2:
                trace_pairs += 1
                tm = trace_multiset(p, ell)
                om = factor_oracle(p, ell).trace_multiset()
                if tm.entries != om.entries:
                    trace_mismatches.append((p, ell))
    return {
        "pairs": pairs,
        "trace_pairs": trace_pairs,
        "verdict_mismatches": verdict_mismatches,
        "trace_mismatches": trace_mismatches,
        "certified": certified,
        "elapsed": time.monotonic() - t0,
    }


@pytest.fixture(scope="session")
def survey_ell2_by_threads():
    out = {}
    for threads in (1, 2, 8):
        rep = run_survey(2, 10**6, threads=threads)
        out[threads] = (rep, to_json_text(survey_dict(rep)))
    return out


def test_criterion_01_worked_witnesses_exact():
    t0 = time.monotonic()
    res7 = membership(7, 2, want_witness=True)
    parts7 = {f.coeffs() for f in res7.witness}
    assert res7.verdict == "member"
    assert parts7 == {(1, 0, 1, 1, 1), (1, 0, 1, 1)}, parts7

    res11 = membership(11, 3, want_witness=True)
    parts11 = {f.coeffs() for f in res11.witness}
    assert res11.verdict == "member"
    assert parts11 == {(1, 0, 1, 2, 2, 2, 1), (2, 0, 1, 2, 1, 1)}, parts11
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0, f"witness construction took {elapsed:.2f}s"
    print(f"criterion 1: both reference splits reproduced in {elapsed*1000:.0f}ms")


def test_criterion_01_cli_round_trip():
    t0 = time.monotonic()
    proc = subprocess.run(
        [sys.executable, "-m", "cycloscope", "member", "7", "--ell", "2",
         "--witness"],
        capture_output=True, text=True, timeout=30,
    )
    elapsed = time.monotonic() - t0
    out = json.loads(proc.stdout)
    got = {out["witness"]["g"]["display"], out["witness"]["h"]["display"]}
    assert got == {"X^4 + X^3 + X^2 + 1", "X^3 + X^2 + 1"}
    assert elapsed < 1.0, f"CLI call took {elapsed:.2f}s"
    print(f"criterion 1 (CLI): split reproduced in {elapsed*1000:.0f}ms")


def test_criterion_02_known_nonmember():
    res = membership(11, 5)
    assert res.verdict == "nonmember"
    assert res.reason == "no_zero_sum"
    print("criterion 2: p=11, ell=5 is a nonmember with reason no_zero_sum")


def test_criterion_03_brute_force_agreement(dual_route_sweep):
    sw = dual_route_sweep
    assert sw["verdict_mismatches"] == [], sw["verdict_mismatches"]
    assert sw["elapsed"] < 600, f"sweep took {sw['elapsed']:.0f}s"
    print(
        f"criterion 3: {sw['pairs']} pairs to {SWEEP_LIMIT} agree "
        f"({len(sw['certified'])} certified by explicit split instead of "
        f"subset table: {sw['certified']}), {sw['elapsed']:.0f}s"
    )


def test_criterion_04_trace_routes_agree(dual_route_sweep):
    sw = dual_route_sweep
    assert sw["trace_mismatches"] == [], sw["trace_mismatches"]
    print(
        f"criterion 4: trace multisets match the factor oracle on "
        f"{sw['trace_pairs']} pairs with index >= 2"
    )


def test_criterion_05_structural_scan_to_1e5():
    t0 = time.monotonic()
    rep = lemma_checks(10**5)
    elapsed = time.monotonic() - t0
    assert rep.passed
    for entry in rep.entries:
        assert entry.violations == (), (entry.ell, entry.violations)
        assert entry.undecided_count == 0
    assert elapsed < 900, f"scan took {elapsed:.0f}s"
    counts = {e.ell: e.member_count for e in rep.entries}
    print(f"criterion 5: zero counterexamples to 10**5, members {counts}, "
          f"{elapsed:.0f}s")


def test_criterion_06_zero_sum_thresholds():
    t0 = time.monotonic()
    for ell in (2, 3, 5, 7):
        assert davenport_constant_verified(ell), ell
    elapsed = time.monotonic() - t0
    assert elapsed < 60, f"enumeration took {elapsed:.0f}s"
    print(f"criterion 6: thresholds confirmed for ell in 2,3,5,7, {elapsed:.1f}s")


def test_criterion_07_artin_enclosure(artin_1e9):
    est = artin_1e9
    assert est.width <= Fraction(2, 10**9), float(est.width)
    assert est.lo <= ARTIN <= est.hi
    window_lo = Fraction(Decimal("0.3739558136"))
    window_hi = Fraction(Decimal("0.3739558137"))
    assert est.lo <= window_hi and window_lo <= est.hi
    print(f"criterion 7: enclosure {est} of width {float(est.width):.2e} "
          f"contains the frozen digits")


def test_criterion_08_lower_bound_consistency(artin_1e9):
    b2 = density_lower_bound(2, 1e-9)
    b3 = density_lower_bound(3, 1e-9)
    tol = Fraction(1, 10**9)
    assert abs(b2.midpoint - (1 - artin_1e9.midpoint)) <= tol
    assert abs(b3.midpoint - (1 - 2 * artin_1e9.midpoint)) <= tol
    assert b2.lo <= ONE_MINUS_A <= b2.hi
    assert b3.lo <= ONE_MINUS_2A <= b3.hi
    from cycloscope import fraction_to_decimal

    digits = fraction_to_decimal(b3.midpoint, 9)
    assert digits.startswith("0.25208"), digits
    print(f"criterion 8: bounds consistent with the constant "
          f"(ell=3 midpoint {digits})")


def test_criterion_09_empirical_densities(survey_ell2_by_threads):
    rep2, _ = survey_ell2_by_threads[8]
    t0 = time.monotonic()
    rep5 = run_survey(5, 10**5, deep_limit=10**5, threads=8)
    elapsed5 = time.monotonic() - t0

    share = Fraction(rep2.member_count, rep2.total_primes)
    assert abs(share - ONE_MINUS_A) < Fraction(1, 100), float(share)
    index_one = Fraction(rep2.index_histogram.get(1, 0), rep2.total_primes)
    assert abs(index_one - ARTIN) < Fraction(1, 100), float(index_one)

    assert rep5.undecided_count == 0
    share5 = Fraction(rep5.member_count, rep5.total_primes)
    floor5 = density_lower_bound(5, 1e-9).lo - Fraction(2, 100)
    assert share5 >= floor5, (float(share5), float(floor5))
    assert elapsed5 < 600
    print(
        f"criterion 9: ell=2 share {float(share):.4f} vs {float(ONE_MINUS_A):.4f}, "
        f"index-1 {float(index_one):.4f} vs {float(ARTIN):.4f}; "
        f"ell=5 share {float(share5):.4f} >= {float(floor5):.4f}, "
        f"undecided 0, {elapsed5:.0f}s"
    )


def test_criterion_10_golomb_consistency():
    g21 = golomb_constant(2, 1)
    h2 = hooley_constant(2)
    assert g21.overlaps(h2), (str(g21), str(h2))

    g22 = golomb_constant(2, 2)
    rep = run_golomb_survey(2, 2, 10**6, threads=8)
    share = Fraction(rep.matching_count, rep.total_primes)
    assert abs(share - g22.midpoint) < Fraction(1, 100), (
        float(share), float(g22.midpoint))
    print(
        f"criterion 10: series/product enclosures overlap; empirical "
        f"{float(share):.4f} vs midpoint {float(g22.midpoint):.4f}"
    )


def test_criterion_11_reversal_identities():
    rng = np.random.default_rng(0x5EED)
    ells = (2, 3, 5, 7, 11)
    cases = 0
    t0 = time.monotonic()
    while cases < 100_000:
        ell = ells[int(rng.integers(len(ells)))]
        deg_f = int(rng.integers(1, 12))
        deg_g = int(rng.integers(1, 12))
        fc = [int(c) for c in rng.integers(0, ell, size=deg_f + 1)]
        gc = [int(c) for c in rng.integers(0, ell, size=deg_g + 1)]
        fc[0] = int(rng.integers(1, ell))  # nonzero at the origin
        fc[-1] = int(rng.integers(1, ell))
        gc[-1] = int(rng.integers(1, ell))
        f = Poly(fc, ell)
        g = Poly(gc, ell)

        assert (f * g).reversal() == f.reversal() * g.reversal()
        assert f.reversal().reversal() == f
        if deg_f >= 2:
            h = f - Poly([0, f.coefficient(1)], ell)  # drop the linear term
            assert h.reversal().trace() == 0
            cases += 1
        cases += 2
    elapsed = time.monotonic() - t0
    print(f"criterion 11: {cases} identity checks passed, {elapsed:.0f}s")


def test_criterion_12_thread_determinism(survey_ell2_by_threads):
    texts = {t: text for t, (rep, text) in survey_ell2_by_threads.items()}
    assert texts[1] == texts[2] == texts[8]
    print(f"criterion 12: ell=2 reports byte-identical across threads 1, 2, 8 "
          f"({len(texts[1])} bytes)")
