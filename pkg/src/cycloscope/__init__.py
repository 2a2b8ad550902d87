"""cycloscope: factorization structure of X**p - 1 over small prime fields.

Three layers, importable directly from the package root:

* exact decisions: ``membership`` (does X**p - 1 split with both parts
  missing their linear term?), with witnesses, brute-force and
  randomized-factorization cross-checks, and the trace machinery
  underneath (``trace_multiset``, ``factor_oracle``,
  ``coset_partition``);
* empirical scans: ``run_survey``, ``run_golomb_survey``,
  ``lemma_checks`` over all primes up to a limit, deterministic for a
  fixed request regardless of worker count;
* proved enclosures of the limiting densities: ``artin_constant``,
  ``restricted_artin_product``, ``density_lower_bound``,
  ``hooley_constant``, ``golomb_constant``.
"""

from .errors import CapacityError, CycloscopeError, InternalError, UsageError
from .polyarith import Poly
from .numbers import (
    euler_phi,
    factorize,
    is_perfect_power,
    is_prime,
    moebius,
    phi_mu_block,
    primes_upto,
    squarefree_part,
)
from .cyclotomic import (
    CosetPartition,
    FactorList,
    TraceMultiset,
    coset_partition,
    cyclotomic_poly,
    factor_oracle,
    is_irreducible,
    multiplicative_order,
    trace_multiset,
)
from .membership import (
    MembershipResult,
    ZeroSumWitness,
    brute_force_membership,
    davenport_brute,
    davenport_constant_verified,
    davenport_witness,
    in_monoid_ring,
    membership,
    reversal,
    trace,
    zero_sum_subset,
)
from .densities import (
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
from .survey import (
    GolombReport,
    LemmaCheckReport,
    PrimeClassification,
    SurveyReport,
    classify_prime,
    lemma_checks,
    run_golomb_survey,
    run_survey,
    sieve_primes,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConstantEstimate",
    "CosetPartition",
    "CycloscopeError",
    "FactorList",
    "GolombReport",
    "InternalError",
    "LemmaCheckReport",
    "MembershipResult",
    "Poly",
    "PrimeClassification",
    "SurveyReport",
    "TraceMultiset",
    "UsageError",
    "ZeroSumWitness",
    "artin_constant",
    "brute_force_membership",
    "classify_prime",
    "coset_partition",
    "cyclotomic_poly",
    "davenport_brute",
    "davenport_constant_verified",
    "davenport_witness",
    "density_lower_bound",
    "euler_phi",
    "factor_oracle",
    "factorize",
    "fraction_to_decimal",
    "fundamental_discriminant",
    "golomb_constant",
    "hooley_constant",
    "in_monoid_ring",
    "is_irreducible",
    "is_perfect_power",
    "is_prime",
    "lemma_checks",
    "longdouble_to_fraction",
    "membership",
    "moebius",
    "moebius_phi_series_partial",
    "multiplicative_order",
    "phi_mu_block",
    "primes_upto",
    "restricted_artin_product",
    "reversal",
    "run_golomb_survey",
    "run_survey",
    "sieve_primes",
    "squarefree_part",
    "trace",
    "trace_multiset",
    "zero_sum_subset",
]
