"""Command line front end.

Exit codes: 0 on success, 2 for invalid requests (bad arguments,
out-of-range parameters, anything the API refuses as a usage error),
3 when a request is valid but exceeds a documented resource cap, and
1 when a self-check style command finds an actual failure.  All report
output goes to stdout and is byte-identical for identical arguments;
progress and timing notes go to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import reports
from .cyclotomic import ORACLE_CAP_DEFAULT, factor_oracle
from .densities import (
    artin_constant,
    density_lower_bound,
    golomb_constant,
    hooley_constant,
)
from .errors import CapacityError, UsageError
from .membership import (
    davenport_brute,
    davenport_constant_verified,
    davenport_witness,
    in_monoid_ring,
    membership,
)
from .polyarith import Poly
from .survey import lemma_checks, run_golomb_survey, run_survey


@dataclass(frozen=True)
class CommandConfig:
    """Parsed invocation: which command plus the shared output options."""

    command: str
    format: str = "json"
    out: str | None = None
    threads: int | None = None


def _count(text: str) -> int:
    """Integer argument, allowing underscores and exact scientific forms."""
    try:
        return int(text.replace("_", ""))
    except ValueError:
        pass
    try:
        f = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if f != int(f):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(f)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycloscope",
        description=(
            "Factorization structure of X**p - 1 over small prime fields: "
            "membership decisions with witnesses, prime surveys, and density "
            "constants with rigorous enclosures."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mem = sub.add_parser(
        "member",
        help="decide whether X**p - 1 splits with both parts missing their linear term",
    )
    mem.add_argument("p", type=_count, help="the prime p")
    mem.add_argument("--ell", type=_count, required=True, help="the field prime")
    mem.add_argument("--witness", action="store_true", help="attach an explicit split")
    mem.add_argument("--oracle-cap", type=_count, default=ORACLE_CAP_DEFAULT)
    mem.add_argument("--format", choices=("json", "text"), default="json")
    mem.set_defaults(func=_cmd_member)

    fac = sub.add_parser(
        "factor-phi",
        help="factor (X**p - 1)/(X - 1) over F_ell into irreducibles",
    )
    fac.add_argument("p", type=_count)
    fac.add_argument("--ell", type=_count, required=True)
    fac.add_argument("--oracle-cap", type=_count, default=ORACLE_CAP_DEFAULT)
    fac.add_argument("--format", choices=("json", "text"), default="json")
    fac.set_defaults(func=_cmd_factor)

    srv = sub.add_parser("survey", help="census of all primes up to a limit")
    srv.add_argument("--ell", type=_count, required=True)
    srv.add_argument("--limit", type=_count, required=True)
    srv.add_argument(
        "--deep-limit",
        type=_count,
        default=0,
        help="run the exact trace test for primes up to this bound (default 0: off)",
    )
    srv.add_argument("--threads", type=_count, default=None)
    srv.add_argument("--out", default=None, help="directory for report files and figures")
    srv.add_argument("--format", choices=("json", "csv", "text"), default="json")
    srv.set_defaults(func=_cmd_survey)

    gol = sub.add_parser(
        "golomb-survey",
        help="count primes whose residue index for a base a is exactly r",
    )
    gol.add_argument("--a", type=_count, required=True)
    gol.add_argument("--r", type=_count, required=True)
    gol.add_argument("--limit", type=_count, required=True)
    gol.add_argument("--threads", type=_count, default=None)
    gol.add_argument("--out", default=None)
    gol.add_argument("--format", choices=("json", "csv", "text"), default="json")
    gol.set_defaults(func=_cmd_golomb)

    con = sub.add_parser("constants", help="density constants with proved enclosures")
    con.add_argument(
        "which", choices=("artin", "bound", "hooley", "golomb"),
        help="artin | bound (needs --ell) | hooley (needs --a) | golomb (needs --a, --r)",
    )
    con.add_argument("--ell", type=_count, default=None)
    con.add_argument("--a", type=_count, default=None)
    con.add_argument("--r", type=_count, default=None)
    con.add_argument("--precision", type=float, default=None)
    con.add_argument("--format", choices=("json", "text"), default="json")
    con.set_defaults(func=_cmd_constants)

    dav = sub.add_parser(
        "davenport",
        help="exhaustively confirm the zero-sum length threshold for Z/ell",
    )
    dav.add_argument("--ell", type=_count, required=True)
    dav.add_argument("--format", choices=("json", "text"), default="json")
    dav.set_defaults(func=_cmd_davenport)

    lem = sub.add_parser(
        "lemma-checks",
        help="sweep all primes up to a limit for violations of the structural rules",
    )
    lem.add_argument("--limit", type=_count, required=True)
    lem.add_argument("--ells", default="2,3,5,7", help="comma-separated field primes")
    lem.add_argument("--threads", type=_count, default=None)
    lem.add_argument("--format", choices=("json", "text"), default="json")
    lem.set_defaults(func=_cmd_lemma)

    st = sub.add_parser("selftest", help="fast end-to-end sanity run")
    st.set_defaults(func=_cmd_selftest)

    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _cmd_member(args) -> int:
    res = membership(args.p, args.ell, want_witness=args.witness, oracle_cap=args.oracle_cap)
    if args.format == "json":
        _emit(reports.to_json_text(reports.membership_dict(res)))
    else:
        lines = [f"p = {res.p}, ell = {res.ell}: {res.verdict} ({res.reason})"]
        if res.order_r is not None:
            lines.append(f"order r = {res.order_r}, index s = {res.index_s}")
        if res.traces is not None:
            pairs = ", ".join(f"{t} (x{m})" for t, m in res.traces.as_sorted_items())
            lines.append(f"factor traces: {pairs}")
        if res.witness is not None:
            g, h = res.witness
            lines.append(f"X^{res.p} - 1 = (g) * (h) with")
            lines.append(f"  g = {g}")
            lines.append(f"  h = {h}")
        if res.witness_note:
            lines.append(f"note: {res.witness_note}")
        _emit("\n".join(lines) + "\n")
    return 0


def _cmd_factor(args) -> int:
    fl = factor_oracle(args.p, args.ell, cap=args.oracle_cap)
    if args.format == "json":
        _emit(reports.to_json_text(reports.factor_list_dict(fl)))
    else:
        lines = [
            f"(X^{fl.p} - 1)/(X - 1) over F_{fl.ell}: "
            f"{len(fl.factors)} factors of degree {fl.r}"
        ]
        lines.extend(f"  {f}" for f in fl.factors)
        _emit("\n".join(lines) + "\n")
    return 0


def _cmd_survey(args) -> int:
    rep = run_survey(args.ell, args.limit, deep_limit=args.deep_limit, threads=args.threads)
    _note(f"survey ell={args.ell} limit={args.limit}: {rep.elapsed_seconds:.1f}s")
    doc = reports.survey_dict(rep)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        reports.write_text(os.path.join(args.out, "report.json"), reports.to_json_text(doc))
        reports.write_text(os.path.join(args.out, "index_histogram.csv"), reports.histogram_csv(rep))
        from .figures import survey_figures

        for path in survey_figures(rep, args.out):
            _note(f"wrote {path}")
    if args.format == "json":
        _emit(reports.to_json_text(doc))
    elif args.format == "csv":
        _emit(reports.histogram_csv(rep))
    else:
        _emit(
            f"primes <= {rep.limit} (ell = {rep.ell}): {rep.total_primes} total, "
            f"{rep.member_count} members, {rep.nonmember_count} nonmembers, "
            f"{rep.undecided_count} undecided\n"
            f"member share {doc['member_share']}, index-1 share {doc['index_one_share']}\n"
        )
    return 0


def _cmd_golomb(args) -> int:
    rep = run_golomb_survey(args.a, args.r, args.limit, threads=args.threads)
    _note(f"golomb survey a={args.a} r={args.r}: {rep.elapsed_seconds:.1f}s")
    doc = reports.golomb_dict(rep)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        reports.write_text(os.path.join(args.out, "report.json"), reports.to_json_text(doc))
        reports.write_text(os.path.join(args.out, "counts.csv"), reports.golomb_csv(rep))
        from .figures import golomb_figures

        for path in golomb_figures(rep, args.out):
            _note(f"wrote {path}")
    if args.format == "json":
        _emit(reports.to_json_text(doc))
    elif args.format == "csv":
        _emit(reports.golomb_csv(rep))
    else:
        _emit(
            f"primes <= {rep.limit}: {rep.matching_count} of {rep.total_primes} "
            f"have index exactly {rep.r} for a = {rep.a} "
            f"(share {doc['matching_share']})\n"
        )
    return 0


def _cmd_constants(args) -> int:
    which = args.which
    if which == "artin":
        est = artin_constant(args.precision if args.precision else 1e-9)
    elif which == "bound":
        if args.ell is None:
            raise UsageError("constants bound needs --ell")
        est = density_lower_bound(args.ell, args.precision if args.precision else 1e-9)
    elif which == "hooley":
        if args.a is None:
            raise UsageError("constants hooley needs --a")
        est = hooley_constant(args.a, args.precision if args.precision else 1e-9)
    else:
        if args.a is None or args.r is None:
            raise UsageError("constants golomb needs --a and --r")
        est = golomb_constant(args.a, args.r, args.precision if args.precision else 1e-3)
    if args.format == "json":
        _emit(reports.to_json_text(est.to_dict()))
    else:
        _emit(str(est) + "\n")
    return 0


def _cmd_davenport(args) -> int:
    forced = davenport_brute(args.ell, args.ell)
    wit = davenport_witness(args.ell, args.ell - 1) if args.ell >= 2 else None
    doc = reports.davenport_dict(args.ell, forced, wit)
    if args.format == "json":
        _emit(reports.to_json_text(doc))
    else:
        _emit(
            f"Z/{args.ell}: every length-{args.ell} sequence has a nonempty "
            f"zero-sum subset: {forced}; length {args.ell - 1} counterexample: "
            f"{wit}\n"
        )
    return 0 if forced and wit is not None else 1


def _cmd_lemma(args) -> int:
    try:
        ells = tuple(int(x) for x in args.ells.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"cannot parse --ells {args.ells!r}")
    rep = lemma_checks(args.limit, ells=ells, threads=args.threads)
    _note(f"lemma checks limit={args.limit}: {rep.elapsed_seconds:.1f}s")
    if args.format == "json":
        _emit(reports.to_json_text(reports.lemma_dict(rep)))
    else:
        for e in rep.entries:
            _emit(
                f"ell={e.ell}: {e.total_primes} primes, {e.member_count} members, "
                f"{len(e.violations)} violations, davenport "
                f"{'ok' if e.davenport_verified else 'FAILED'}\n"
            )
        _emit(f"{'PASS' if rep.passed else 'FAIL'}\n")
    return 0 if rep.passed else 1


def _reversal_spot_checks(cases: int) -> list[str]:
    """Randomized reversal identities with a fixed seed; empty list means pass."""
    rng = np.random.Generator(np.random.PCG64(0x5EED))
    failures = []
    ells = (2, 3, 5, 7, 11)
    for i in range(cases):
        ell = ells[int(rng.integers(len(ells)))]
        deg_f = int(rng.integers(1, 12))
        deg_g = int(rng.integers(1, 12))
        f = _random_unit_poly(rng, deg_f, ell)
        g = _random_unit_poly(rng, deg_g, ell)
        if f.reversal().reversal() != f:
            failures.append(f"double reversal failed: ell={ell}, f={f}")
        if (f * g).reversal() != f.reversal() * g.reversal():
            failures.append(f"reversal not multiplicative: ell={ell}")
        h = f - f.coefficient(1) * Poly.x(ell)
        if h.degree >= 1 and h.coefficient(0) != 0:
            if not in_monoid_ring(h) or h.reversal().trace() != 0:
                failures.append(f"reversed trace not zero: ell={ell}, h={h}")
        if failures:
            break
    return failures


def _random_unit_poly(rng, degree: int, ell: int) -> Poly:
    coeffs = rng.integers(0, ell, size=degree + 1)
    coeffs[0] = 1 + int(rng.integers(ell - 1))
    coeffs[degree] = 1 + int(rng.integers(ell - 1))
    return Poly(coeffs, ell)


def _cmd_selftest(args) -> int:
    ok = True

    rep = lemma_checks(10**4, ells=(2, 3, 5, 7))
    line = "ok" if rep.passed else "FAIL"
    print(f"{line}: structural sweep to 10**4 "
          f"({sum(e.total_primes for e in rep.entries)} classifications)")
    ok = ok and rep.passed

    for ell in (2, 3, 5):
        verified = davenport_constant_verified(ell)
        print(f"{'ok' if verified else 'FAIL'}: zero-sum threshold for Z/{ell} is {ell}")
        ok = ok and verified

    failures = _reversal_spot_checks(10**4)
    if failures:
        print(f"FAIL: {failures[0]}")
        ok = False
    else:
        print("ok: reversal identities on 10**4 random cases")

    wit = membership(7, 2, want_witness=True).witness
    good = wit is not None and wit[0] * wit[1] == Poly.monomial(7, 2) - 1
    print(f"{'ok' if good else 'FAIL'}: witness split of X^7 - 1 over F_2")
    ok = ok and good

    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
