"""Stable report rendering: JSON documents and CSV tables.

Every function here maps a result object to plain data with a fixed
key order and exact-arithmetic number rendering (counts as integers,
shares as 9-place decimal strings computed from exact fractions), so
that two runs with the same inputs produce byte-identical files no
matter how the work was parallelized.  Wall-clock timings are
deliberately left out of every document; they go to stderr instead.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .densities import fraction_to_decimal

SHARE_PLACES = 9


def share_string(num: int, den: int) -> str:
    """num/den as a fixed 9-place decimal string (half-even)."""
    if den == 0:
        return fraction_to_decimal(Fraction(0), SHARE_PLACES)
    return fraction_to_decimal(Fraction(num, den), SHARE_PLACES)


def poly_dict(f) -> dict:
    degree = f.degree
    return {
        "degree": None if degree == -math.inf else degree,
        "coeffs": list(f.coeffs()),
        "display": str(f),
    }


def membership_dict(res) -> dict:
    out = {
        "p": res.p,
        "ell": res.ell,
        "verdict": res.verdict,
        "reason": res.reason,
        "order": res.order_r,
        "index": res.index_s,
        "trace_multiset": (
            [[t, m] for t, m in res.traces.as_sorted_items()]
            if res.traces is not None
            else None
        ),
        "zero_sum_subset": (
            [[v, c] for v, c in res.zero_sum.chosen]
            if res.zero_sum is not None
            else None
        ),
        "witness": (
            {"g": poly_dict(res.witness[0]), "h": poly_dict(res.witness[1])}
            if res.witness is not None
            else None
        ),
        "witness_note": res.witness_note,
    }
    return out


def factor_list_dict(fl) -> dict:
    return {
        "p": fl.p,
        "ell": fl.ell,
        "order": fl.r,
        "index": len(fl.factors),
        "factors": [poly_dict(f) for f in fl.factors],
    }


def trace_multiset_dict(tm) -> dict:
    return {
        "ell": tm.ell,
        "index": tm.s,
        "traces": [[t, m] for t, m in tm.as_sorted_items()],
    }


def survey_dict(rep) -> dict:
    total = rep.total_primes
    return {
        "ell": rep.ell,
        "limit": rep.limit,
        "deep_limit": rep.deep_limit,
        "total_primes": total,
        "members": rep.member_count,
        "nonmembers": rep.nonmember_count,
        "undecided": rep.undecided_count,
        "member_share": share_string(rep.member_count, total),
        "member_share_with_undecided": share_string(
            rep.member_count + rep.undecided_count, total
        ),
        "index_one_share": share_string(rep.index_histogram.get(1, 0), total),
        "index_histogram": {
            str(s): rep.index_histogram[s] for s in sorted(rep.index_histogram)
        },
        "running": [list(row) for row in rep.running],
        "references": {key: est.to_dict() for key, est in sorted(rep.references.items())},
    }


def golomb_dict(rep) -> dict:
    return {
        "a": rep.a,
        "r": rep.r,
        "limit": rep.limit,
        "total_primes": rep.total_primes,
        "congruent": rep.congruent_count,
        "matching": rep.matching_count,
        "matching_share": share_string(rep.matching_count, rep.total_primes),
        "matching_share_among_congruent": share_string(
            rep.matching_count, rep.congruent_count
        ),
        "running": [list(row) for row in rep.running],
        "reference": rep.reference.to_dict(),
    }


def lemma_dict(rep) -> dict:
    return {
        "limit": rep.limit,
        "passed": rep.passed,
        "entries": [
            {
                "ell": e.ell,
                "total_primes": e.total_primes,
                "members": e.member_count,
                "nonmembers": e.nonmember_count,
                "undecided": e.undecided_count,
                "davenport_verified": e.davenport_verified,
                "violations": [list(v) for v in e.violations],
            }
            for e in rep.entries
        ],
    }


def davenport_dict(ell: int, forced: bool, witness) -> dict:
    return {
        "ell": ell,
        "constant": ell,
        "every_length_ell_sequence_has_zero_sum_subset": forced,
        "witness_without_zero_sum_at_length_ell_minus_1": (
            list(witness) if witness is not None else None
        ),
    }


def to_json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def histogram_csv(rep) -> str:
    lines = ["index,count"]
    for s in sorted(rep.index_histogram):
        lines.append(f"{s},{rep.index_histogram[s]}")
    return "\n".join(lines) + "\n"


def golomb_csv(rep) -> str:
    d = golomb_dict(rep)
    lines = ["field,value"]
    for key in ("a", "r", "limit", "total_primes", "congruent", "matching",
                "matching_share", "matching_share_among_congruent"):
        lines.append(f"{key},{d[key]}")
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
