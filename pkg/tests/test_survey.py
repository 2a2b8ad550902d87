"""Prime scans: classification, chunked counting, determinism."""

import pytest

from cycloscope import (
    classify_prime,
    lemma_checks,
    membership,
    multiplicative_order,
    primes_upto,
    run_golomb_survey,
    run_survey,
    sieve_primes,
)
from cycloscope.errors import CapacityError, UsageError
from cycloscope.reports import golomb_dict, lemma_dict, survey_dict, to_json_text


def test_sieve_primes_matches_reference():
    assert sieve_primes(0, 100).tolist() == primes_upto(100).tolist()
    assert sieve_primes(90, 97).tolist() == [97]
    assert sieve_primes(24, 28).size == 0
    with pytest.raises(UsageError):
        sieve_primes(50, 10)
    lo = 10**6
    window = sieve_primes(lo, lo + 10**4)
    expect = [p for p in primes_upto(lo + 10**4).tolist() if p >= lo]
    assert window.tolist() == expect


def test_sieve_primes_cap():
    with pytest.raises(CapacityError):
        sieve_primes(0, 2 * 10**8)


def test_classify_prime_examples():
    c = classify_prime(7, 2)
    assert (c.status, c.reason) == ("member", "index_ge_ell")
    assert (c.order_r, c.index_s) == (3, 2)

    c = classify_prime(3, 2)
    assert (c.status, c.reason) == ("nonmember", "primitive_root")
    assert c.index_s == 1

    # index 2 over F_5 needs the deep test
    c = classify_prime(11, 5)
    assert (c.status, c.reason) == ("undecided", "deep_test_skipped")
    c = classify_prime(11, 5, deep_limit=11)
    assert (c.status, c.reason) == ("nonmember", "no_zero_sum")
    c = classify_prime(13, 5, deep_limit=13)
    assert (c.status, c.reason) == ("member", "zero_sum_subset")
    # below the deep limit the trace route must agree with membership
    for p in (11, 13, 41, 71):
        got = classify_prime(p, 5, deep_limit=100)
        assert got.status == membership(p, 5).verdict


def test_classify_prime_rejects_self():
    with pytest.raises(UsageError):
        classify_prime(5, 5)


def test_run_survey_counts_match_direct_loop():
    limit = 2000
    rep = run_survey(3, limit, deep_limit=limit)
    direct = [classify_prime(p, 3, deep_limit=limit)
              for p in sieve_primes(2, limit).tolist() if p != 3]
    assert rep.total_primes == len(direct)
    assert rep.member_count == sum(c.status == "member" for c in direct)
    assert rep.nonmember_count == sum(c.status == "nonmember" for c in direct)
    assert rep.undecided_count == 0
    hist = {}
    for c in direct:
        hist[c.index_s] = hist.get(c.index_s, 0) + 1
    assert rep.index_histogram == hist


def test_run_survey_undecided_gating():
    shallow = run_survey(5, 2000)
    assert shallow.undecided_count > 0
    deep = run_survey(5, 2000, deep_limit=2000)
    assert deep.undecided_count == 0
    assert deep.total_primes == shallow.total_primes
    # the deep test only resolves cases, never flips decided ones
    assert deep.member_count >= shallow.member_count
    assert deep.nonmember_count >= shallow.nonmember_count


def test_run_survey_is_deterministic_across_threads():
    reports = [
        to_json_text(survey_dict(run_survey(2, 10**4, threads=t)))
        for t in (1, 2, 5)
    ]
    assert reports[0] == reports[1] == reports[2]


def test_run_survey_running_checkpoints():
    rep = run_survey(2, 10**5)
    assert 0 < len(rep.running) <= 256
    bounds = [row[0] for row in rep.running]
    assert bounds == sorted(bounds)
    assert bounds[-1] == 10**5
    last = rep.running[-1]
    assert last[1] == rep.member_count
    assert last[2] == rep.nonmember_count
    assert last[3] == rep.undecided_count
    # counts only grow along the scan
    for a, b in zip(rep.running, rep.running[1:]):
        assert all(x <= y for x, y in zip(a[1:], b[1:]))


def test_run_survey_references_present():
    rep = run_survey(2, 1000)
    assert set(rep.references) == {
        "member_density_lower_bound", "primitive_root_density",
    }


def test_run_survey_validation():
    with pytest.raises(UsageError):
        run_survey(4, 1000)
    with pytest.raises(UsageError):
        run_survey(2, 1)
    with pytest.raises(CapacityError):
        run_survey(2, 2 * 10**8)


def test_run_golomb_survey_matches_direct_loop():
    limit = 2000
    rep = run_golomb_survey(2, 2, limit)
    total = congruent = matching = 0
    for p in sieve_primes(2, limit).tolist():
        if p == 2:
            continue
        total += 1
        if (p - 1) % 2 == 0:
            congruent += 1
            if 2 * multiplicative_order(2, p) == p - 1:
                matching += 1
    assert rep.total_primes == total
    assert rep.congruent_count == congruent
    assert rep.matching_count == matching


def test_run_golomb_survey_r_three():
    limit = 3000
    rep = run_golomb_survey(2, 3, limit)
    congruent = matching = 0
    for p in sieve_primes(3, limit).tolist():
        if (p - 1) % 3 == 0:
            congruent += 1
            if 3 * multiplicative_order(2, p) == p - 1:
                matching += 1
    assert rep.congruent_count == congruent
    assert rep.matching_count == matching
    assert rep.congruent_count < rep.total_primes


def test_run_golomb_survey_deterministic():
    a = to_json_text(golomb_dict(run_golomb_survey(3, 2, 10**4, threads=1)))
    b = to_json_text(golomb_dict(run_golomb_survey(3, 2, 10**4, threads=4)))
    assert a == b


def test_run_golomb_survey_validation():
    with pytest.raises(UsageError):
        run_golomb_survey(1, 2, 1000)
    with pytest.raises(UsageError):
        run_golomb_survey(0, 2, 1000)
    with pytest.raises(UsageError):
        run_golomb_survey(2, 0, 1000)


def test_lemma_checks_small():
    rep = lemma_checks(3000)
    assert rep.passed
    assert [e.ell for e in rep.entries] == [2, 3, 5, 7]
    for e in rep.entries:
        assert e.violations == ()
        assert e.davenport_verified
        assert e.undecided_count == 0
        assert e.member_count + e.nonmember_count == e.total_primes
    d = lemma_dict(rep)
    assert d["passed"] is True


def test_lemma_checks_deterministic_across_threads():
    a = lemma_dict(lemma_checks(5000, ells=(2, 5), threads=1))
    b = lemma_dict(lemma_checks(5000, ells=(2, 5), threads=3))
    assert to_json_text(a) == to_json_text(b)


def test_lemma_checks_counts_match_survey():
    limit = 4000
    rep = lemma_checks(limit, ells=(3,))
    survey = run_survey(3, limit, deep_limit=limit)
    entry = rep.entries[0]
    assert entry.member_count == survey.member_count
    assert entry.nonmember_count == survey.nonmember_count
