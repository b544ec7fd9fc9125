"""Exact arithmetic for binary expansions over Kakeya sequences.

Binary digit expansions ``x = sum c_i * p_i`` over positive sequences whose
every term is dominated by the sum of the later ones, with the
Fibonacci-reciprocal and golden-ratio-power families as the primary
instances. All verdicts are certified: exact field arithmetic in Q(sqrt5)
where values are closed-form, rational-endpoint enclosures refined on demand
where they are not.
"""

from .errors import (
    BranchPlanError,
    DomainError,
    InsufficientBranchingError,
    KakeyaError,
    ParseError,
    PartitionInvariantError,
    UndecidedAtCapError,
)
from .exactnum import (
    PHI,
    SQRT5,
    Interval,
    IntervalOrder,
    QuadRat,
    Rational,
    format_scalar,
    interval_cmp,
    parse_rational,
    parse_scalar,
    quad_sign,
    quad_to_interval,
    sqrt5_enclosure,
)
from .fibonacci import (
    DoublingResult,
    binet_nearest_check,
    cassini_check,
    doubling_check,
    fib,
    odd_index_tail_check,
    s_constant,
)
from .sequences import (
    GOLDEN_BINET,
    CheckReport,
    CustomFinite,
    FibonacciReciprocal,
    Geometric,
    PerturbationRule,
    PerturbedGeometric,
    SequenceDescriptor,
    Verdict,
    kakeya_check,
    parse_descriptor,
    perturbation_check,
    ratio_condition_check,
    rho_check,
    special_indices,
)
from .expander import (
    BranchPlan,
    DigitPrefix,
    ExpansionCertificate,
    Feasibility,
    PrefixCounts,
    TargetValue,
    TiePolicy,
    build_branch_plan,
    certificate_from_text,
    certificate_to_text,
    count_prefixes,
    digit_frequency,
    enumerate_expansions,
    feasible_prefix,
    greedy_expand,
    kakeya_partition,
    lazy_expand,
    verify_branch_plan,
)

__version__ = "0.1.0"
