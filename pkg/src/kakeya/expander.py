"""Constructive expansion machinery over a Kakeya-type sequence: the two-bin
partition procedure, greedy/lazy digit rules, certified prefix feasibility,
prefix counting/enumeration by pruned search, and branch-plan construction
from special elements.

Every digit decision goes through one certified-comparison gate
(:func:`_sign_of`): exact targets are decided by :func:`quad_sign`, and
enclosure-backed quantities are refined until they separate or a cap is hit.
Ties that an enclosure can never split surface as UNDECIDED (or an explicit
error in the digit rules); no digit is ever fabricated.

A target equal to the full series sum is representable symbolically
(:meth:`TargetValue.sequence_sum`), in which case residual-versus-tail
comparisons cancel the common tail and become exact; this is what makes the
boundary expansions (all zeros, all ones) decidable rather than eternally
borderline.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, NamedTuple

from .errors import (
    BranchPlanError,
    DomainError,
    InsufficientBranchingError,
    ParseError,
    PartitionInvariantError,
    UndecidedAtCapError,
)
from .exactnum import Interval, QuadRat, format_scalar, parse_rational, parse_scalar, quad_sign, quad_to_interval
from .sequences import (
    SequenceDescriptor,
    Verdict,
    certified_sign,
    kakeya_check,
    near_tie_width,
    parse_descriptor,
    ratio_condition_check,
    special_indices,
)

DEFAULT_CAP = 64
START_WIDTH = Fraction(1, 256)
CERT_WIDTH = Fraction(1, 1 << 32)

_QR_ZERO = QuadRat(Fraction(0))


class Feasibility(Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"
    UNDECIDED = "UNDECIDED"


class TiePolicy(Enum):
    PREFER_X_BIN = "prefer-x-bin"
    PREFER_COMPLEMENT_BIN = "prefer-complement-bin"


@dataclass(frozen=True)
class DigitPrefix:
    """A finite 0/1 word, indexed from 1. Immutable value semantics."""

    bits: tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(self.bits)
        if any(b not in (0, 1) for b in bits):
            raise DomainError("digits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "DigitPrefix":
        s = text.strip()
        if any(c not in "01" for c in s):
            raise ParseError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in s))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def bit(self, i: int) -> int:
        if not 1 <= i <= len(self.bits):
            raise DomainError(f"digit index {i} outside [1, {len(self.bits)}]")
        return self.bits[i - 1]

    def with_bit(self, b: int) -> "DigitPrefix":
        return DigitPrefix(self.bits + (b,))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class TargetValue:
    """The value being expanded: an exact field element, a refinable
    enclosure, or (symbolically) the full series sum of a descriptor."""

    exact: QuadRat | None = None
    refiner: Callable[[Fraction], Interval] | None = None
    sum_desc: SequenceDescriptor | None = None

    def __post_init__(self):
        provided = sum(v is not None for v in (self.exact, self.refiner, self.sum_desc))
        if provided != 1:
            raise DomainError("target needs exactly one of: exact value, refiner, sequence sum")

    @classmethod
    def from_exact(cls, value) -> "TargetValue":
        if not isinstance(value, QuadRat):
            value = QuadRat(Fraction(value))
        return cls(exact=value)

    @classmethod
    def from_refiner(cls, fn: Callable[[Fraction], Interval]) -> "TargetValue":
        return cls(refiner=fn)

    @classmethod
    def sequence_sum(cls, desc: SequenceDescriptor) -> "TargetValue":
        return cls(sum_desc=desc)

    def enclose(self, width) -> Interval:
        w = Fraction(width)
        if w <= 0:
            raise DomainError("width must be positive")
        if self.exact is not None:
            return quad_to_interval(self.exact, w)
        if self.sum_desc is not None:
            return self.sum_desc.tail_enclosure(0, w)
        return self.refiner(w)

    def label(self) -> str | None:
        """Serialization text; None for refiner-backed targets."""
        if self.exact is not None:
            return format_scalar(self.exact)
        if self.sum_desc is not None:
            return "S"
        return None


@dataclass(frozen=True)
class ExpansionCertificate:
    """A finite prefix together with the exact machinery needed to audit it:
    the exact partial sum, an enclosure of the residual ``x - partial``, and
    the certified feasibility verdict."""

    desc: SequenceDescriptor
    target: TargetValue
    prefix: DigitPrefix
    partial: QuadRat
    residual_enclosure: Interval
    feasible: Feasibility


@dataclass(frozen=True)
class BranchPlan:
    """Pairwise non-adjacent special indices whose term sum is certified to
    fit under ``min(x, S - x)``; any 0/1 pattern over them extends to a full
    expansion of ``x``."""

    indices: tuple[int, ...]
    budget_certificate: Interval


class PrefixCounts(NamedTuple):
    depth: int
    feasible: tuple[int, ...]  # feasible[n] = certified-feasible prefixes of length n
    undecided: tuple[int, ...]


class FrequencyResult(NamedTuple):
    ones: int
    zeros: int
    ratio: Fraction


# -- the certified-comparison gate -------------------------------------------


def _sign_of(
    desc: SequenceDescriptor,
    const: QuadRat,
    *,
    x: TargetValue | None = None,
    x_coef: int = 0,
    tail_index: int | None = None,
    tail_coef: int = 0,
    cap: int = DEFAULT_CAP,
    start_width: Fraction = START_WIDTH,
) -> int | None:
    """Certified sign of ``const + x_coef*x + tail_coef*T_{tail_index}``.

    Tails fold to ``S - head`` (or a closed form) and symbolic sum-targets
    fold into the same ``S`` coefficient, so whenever the combination is
    exact it is decided by quad_sign; otherwise the shared enclosures are
    refined up to ``cap`` halvings. None means undecided at the cap.
    """
    s_coef = 0
    if tail_coef:
        exact_tail = desc.tail_exact(tail_index)
        if exact_tail is not None:
            const = const + tail_coef * exact_tail
        else:
            s_coef += tail_coef
            const = const - tail_coef * desc.head(tail_index)
    extra = None
    if x_coef:
        if x.exact is not None:
            const = const + x_coef * x.exact
        elif x.sum_desc is not None:
            full = x.sum_desc.tail_exact(0)
            if full is not None:
                const = const + x_coef * full
            elif x.sum_desc == desc:
                s_coef += x_coef
            else:
                extra = lambda w, _x=x, _c=x_coef: _x.enclose(w).scale(_c)
        else:
            if x_coef == 1:
                extra = x.enclose
            else:
                extra = lambda w, _x=x, _c=x_coef: _x.enclose(w).scale(_c)
    sign, _ = certified_sign(desc, const, s_coef, extra=extra, cap=cap, start_width=start_width)
    return sign


def _assess(
    desc: SequenceDescriptor,
    x: TargetValue,
    n: int,
    partial: QuadRat,
    cap: int,
    start_width: Fraction,
) -> Feasibility:
    """Verdict for a length-n prefix with exact partial sum ``partial``:
    FEASIBLE iff ``0 <= x - partial <= T_n`` certified."""
    lower = _sign_of(desc, -partial, x=x, x_coef=1, cap=cap, start_width=start_width)
    if lower is not None and lower < 0:
        return Feasibility.INFEASIBLE
    upper = _sign_of(
        desc, -partial, x=x, x_coef=1, tail_index=n, tail_coef=-1, cap=cap, start_width=start_width
    )
    if upper is not None and upper > 0:
        return Feasibility.INFEASIBLE
    if lower is None or upper is None:
        return Feasibility.UNDECIDED
    return Feasibility.FEASIBLE


def _partial_sum(desc: SequenceDescriptor, bits) -> QuadRat:
    total = _QR_ZERO
    for i, b in enumerate(bits, start=1):
        if b:
            total = total + desc.term(i)
    return total


def _residual_enclosure(desc, x: TargetValue, partial: QuadRat, width: Fraction) -> Interval:
    half = Fraction(width, 2)
    return x.enclose(half) - quad_to_interval(partial, half)


def _certificate(desc, x, prefix: DigitPrefix, partial: QuadRat, width, cap) -> ExpansionCertificate:
    return ExpansionCertificate(
        desc=desc,
        target=x,
        prefix=prefix,
        partial=partial,
        residual_enclosure=_residual_enclosure(desc, x, partial, Fraction(width)),
        feasible=_assess(desc, x, len(prefix), partial, cap, START_WIDTH),
    )


def _require_in_range(desc, x: TargetValue, cap: int) -> None:
    """Domain error when x is certified outside [0, S]."""
    lo = _sign_of(desc, _QR_ZERO, x=x, x_coef=1, cap=cap)
    if lo is not None and lo < 0:
        raise DomainError("target certified below 0")
    hi = _sign_of(desc, _QR_ZERO, x=x, x_coef=1, tail_index=0, tail_coef=-1, cap=cap)
    if hi is not None and hi > 0:
        raise DomainError("target certified above the series sum")


def _require_interior(desc, x: TargetValue, cap: int) -> None:
    lo = _sign_of(desc, _QR_ZERO, x=x, x_coef=1, cap=cap)
    if lo is None or lo <= 0:
        raise DomainError("target not certified strictly positive")
    hi = _sign_of(desc, _QR_ZERO, x=x, x_coef=1, tail_index=0, tail_coef=-1, cap=cap)
    if hi is None or hi >= 0:
        raise DomainError("target not certified strictly below the series sum")


# -- operations ---------------------------------------------------------------


def feasible_prefix(
    desc: SequenceDescriptor,
    x: TargetValue,
    prefix: DigitPrefix,
    width: Fraction = START_WIDTH,
    cap: int = DEFAULT_CAP,
) -> Feasibility:
    """Whether ``prefix`` extends to a full expansion of ``x``: certified
    FEASIBLE/INFEASIBLE, or UNDECIDED only for boundary ties at the cap."""
    partial = _partial_sum(desc, prefix)
    return _assess(desc, x, len(prefix), partial, cap, Fraction(width))


def greedy_expand(
    desc: SequenceDescriptor,
    x: TargetValue,
    n: int,
    *,
    width: Fraction = CERT_WIDTH,
    cap: int = DEFAULT_CAP,
) -> ExpansionCertificate:
    """Take every digit that fits: ``c_k = 1`` iff ``partial + p_k <= x``."""
    if n < 1:
        raise DomainError(f"digit count must be >= 1, got {n}")
    _require_in_range(desc, x, cap)
    bits: list[int] = []
    partial = _QR_ZERO
    for k in range(1, n + 1):
        stepped = partial + desc.term(k)
        sign = _sign_of(desc, -stepped, x=x, x_coef=1, cap=cap)
        if sign is None:
            raise UndecidedAtCapError(f"greedy digit {k} undecided at cap", index=k)
        if sign >= 0:
            bits.append(1)
            partial = stepped
        else:
            bits.append(0)
    return _certificate(desc, x, DigitPrefix(tuple(bits)), partial, width, cap)


def lazy_expand(
    desc: SequenceDescriptor,
    x: TargetValue,
    n: int,
    *,
    width: Fraction = CERT_WIDTH,
    cap: int = DEFAULT_CAP,
) -> ExpansionCertificate:
    """Keep a zero whenever the remaining tail still covers the residual:
    ``c_k = 0`` iff ``x - partial <= T_k``."""
    if n < 1:
        raise DomainError(f"digit count must be >= 1, got {n}")
    _require_in_range(desc, x, cap)
    bits: list[int] = []
    partial = _QR_ZERO
    for k in range(1, n + 1):
        sign = _sign_of(
            desc, -partial, x=x, x_coef=1, tail_index=k, tail_coef=-1, cap=cap,
            start_width=near_tie_width(desc, k, START_WIDTH),
        )
        if sign is None:
            raise UndecidedAtCapError(f"lazy digit {k} undecided at cap", index=k)
        if sign <= 0:
            bits.append(0)
        else:
            bits.append(1)
            partial = partial + desc.term(k)
    return _certificate(desc, x, DigitPrefix(tuple(bits)), partial, width, cap)


def kakeya_partition(
    desc: SequenceDescriptor,
    x: TargetValue,
    n: int,
    tie: TiePolicy = TiePolicy.PREFER_X_BIN,
    *,
    cap: int = DEFAULT_CAP,
) -> tuple[DigitPrefix, DigitPrefix]:
    """Assign indices 1..n to two bins with running-sum budgets ``x`` and
    ``S - x``; index k goes to a bin only when its budget certifiably still
    accommodates ``p_k``. Returns (x-bin indicator, complement indicator).

    At least one bin always fits for a Kakeya sequence; both bins certified
    infeasible therefore raises :class:`PartitionInvariantError`.
    """
    if n < 0:
        raise DomainError(f"index count must be >= 0, got {n}")
    _require_in_range(desc, x, cap)
    bits: list[int] = []
    sum1 = sum2 = _QR_ZERO
    for k in range(1, n + 1):
        t = desc.term(k)

        def fits_x_bin() -> int | None:
            return _sign_of(desc, -(sum1 + t), x=x, x_coef=1, cap=cap)

        def fits_complement() -> int | None:
            # p_k + sum2 <= S - x
            return _sign_of(desc, -(sum2 + t), x=x, x_coef=-1, tail_index=0, tail_coef=1, cap=cap)

        order = (1, 2) if tie is TiePolicy.PREFER_X_BIN else (2, 1)
        signs: dict[int, int | None] = {}
        choice = None
        for bin_id in order:
            signs[bin_id] = fits_x_bin() if bin_id == 1 else fits_complement()
            if signs[bin_id] is not None and signs[bin_id] >= 0:
                choice = bin_id
                break
        if choice is None:
            if all(s is not None and s < 0 for s in signs.values()):
                raise PartitionInvariantError(
                    f"no feasible bin at index {k}: the sequence violates the Kakeya property"
                )
            raise UndecidedAtCapError(f"bin choice at index {k} undecided at cap", index=k)
        if choice == 1:
            bits.append(1)
            sum1 = sum1 + t
        else:
            bits.append(0)
            sum2 = sum2 + t
    prefix = DigitPrefix(tuple(bits))
    complement = DigitPrefix(tuple(1 - b for b in bits))
    return prefix, complement


def count_prefixes(
    desc: SequenceDescriptor,
    x: TargetValue,
    depth: int,
    *,
    width: Fraction = START_WIDTH,
    cap: int = DEFAULT_CAP,
) -> PrefixCounts:
    """Exact number of certified-feasible prefixes of every length <= depth.

    Depth-first search, zero branch first; certified-infeasible nodes are
    pruned (their extensions stay infeasible), undecided nodes are tallied
    separately and still explored.
    """
    if depth < 0:
        raise DomainError(f"depth must be >= 0, got {depth}")
    width = Fraction(width)
    feasible = [0] * (depth + 1)
    undecided = [0] * (depth + 1)

    def walk(n: int, partial: QuadRat) -> None:
        verdict = _assess(desc, x, n, partial, cap, width)
        if verdict is Feasibility.INFEASIBLE:
            return
        if verdict is Feasibility.FEASIBLE:
            feasible[n] += 1
        else:
            undecided[n] += 1
        if n == depth:
            return
        t = desc.term(n + 1)
        walk(n + 1, partial)
        walk(n + 1, partial + t)

    walk(0, _QR_ZERO)
    return PrefixCounts(depth, tuple(feasible), tuple(undecided))


def enumerate_expansions(
    desc: SequenceDescriptor,
    x: TargetValue,
    count: int,
    depth: int,
    *,
    width: Fraction = CERT_WIDTH,
    cap: int = DEFAULT_CAP,
) -> list[ExpansionCertificate]:
    """The first ``count`` certified-feasible prefixes of length ``depth`` in
    zero-branch-first order; each extends to a full expansion."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    _require_interior(desc, x, cap)
    found: list[tuple[tuple[int, ...], QuadRat]] = []

    def walk(n: int, bits: tuple[int, ...], partial: QuadRat) -> None:
        if len(found) >= count:
            return
        verdict = _assess(desc, x, n, partial, cap, START_WIDTH)
        if verdict is Feasibility.INFEASIBLE:
            return
        if n == depth:
            if verdict is Feasibility.FEASIBLE:
                found.append((bits, partial))
            return
        t = desc.term(n + 1)
        walk(n + 1, bits + (0,), partial)
        walk(n + 1, bits + (1,), partial + t)

    walk(0, (), _QR_ZERO)
    if len(found) < count:
        raise InsufficientBranchingError(
            f"only {len(found)} feasible prefixes of depth {depth} exist (requested {count})",
            achievable=len(found),
        )
    return [
        _certificate(desc, x, DigitPrefix(bits), partial, width, cap) for bits, partial in found
    ]


# -- branch plans -------------------------------------------------------------


def _certify_hypotheses(desc, upto: int, width: Fraction, cap: int) -> None:
    report = kakeya_check(desc, upto, strict=True, width=width, cap=cap)
    if not report.all_hold:
        bad = report.indices(Verdict.FAILS) + report.indices(Verdict.UNDECIDED)
        raise DomainError(
            f"sequence fails strict tail dominance within [1, {upto}] (indices {sorted(bad)})"
        )
    ratio = ratio_condition_check(desc, upto)
    if not ratio.all_hold:
        raise DomainError(
            f"sequence fails the ratio-at-most-2 condition within [1, {upto}]"
        )


def _fits_budget(desc, x: TargetValue, cand_sum: QuadRat, cap: int) -> bool:
    s1 = _sign_of(desc, -cand_sum, x=x, x_coef=1, cap=cap)
    if s1 is None or s1 < 0:
        return False
    s2 = _sign_of(desc, -cand_sum, x=x, x_coef=-1, tail_index=0, tail_coef=1, cap=cap)
    return s2 is not None and s2 >= 0


def _removal_margin_sign(desc, n: int, k: int, width: Fraction, cap: int) -> int | None:
    """Sign of ``T_n - p_n - p_k``: the slack left at index n after the
    special element at k is removed."""
    value = desc.term(n) + desc.term(k)
    exact = desc.tail_exact(n)
    if exact is not None:
        return quad_sign(exact - value)
    sign, _ = certified_sign(
        desc, -(desc.head(n) + value), 1, cap=cap, start_width=near_tie_width(desc, n, width)
    )
    return sign


def _budget_certificate(desc, x: TargetValue, plan_sum: QuadRat, width: Fraction, cap: int) -> Interval:
    cert = None
    w = Fraction(width)
    for _ in range(max(cap, 1)):
        quarter = w / 4
        xe = x.enclose(quarter)
        se = desc.tail_enclosure(0, quarter)
        s_minus_x = se - xe
        budget = Interval(min(xe.lo, s_minus_x.lo), min(xe.hi, s_minus_x.hi))
        cert = budget - quad_to_interval(plan_sum, quarter)
        if cert.width <= width:
            return cert
        w /= 2
    raise UndecidedAtCapError("budget certificate width unreachable", best=cert)


def build_branch_plan(
    desc: SequenceDescriptor,
    x: TargetValue,
    m: int,
    width: Fraction = Fraction(1, 1024),
    *,
    search_upto: int = 100,
    hypothesis_upto: int = 50,
    stability_window: int = 200,
    cap: int = DEFAULT_CAP,
) -> BranchPlan:
    """Select ``m`` special indices, smallest first, pairwise separated by at
    least 2, whose term sum is certified <= min(x, S - x).

    The descriptor must pass strict tail dominance and the ratio condition on
    ``[1, hypothesis_upto]``, and ``x`` must be certified strictly interior.
    For each selected index the removal-stability margin ``T_n - p_n - p_k``
    is certified positive over the window ``n < k, n <= stability_window``.
    """
    if m < 1:
        raise DomainError(f"plan size must be >= 1, got {m}")
    width = Fraction(width)
    _certify_hypotheses(desc, hypothesis_upto, width, cap)
    _require_interior(desc, x, cap)
    members, _report = special_indices(desc, search_upto, width, cap)
    chosen: list[int] = []
    plan_sum = _QR_ZERO
    for idx in sorted(members):
        if chosen and idx <= chosen[-1] + 1:
            continue
        cand = plan_sum + desc.term(idx)
        if not _fits_budget(desc, x, cand, cap):
            continue
        chosen.append(idx)
        plan_sum = cand
        if len(chosen) == m:
            break
    if len(chosen) < m:
        raise BranchPlanError(
            f"only {len(chosen)} special indices fit the budget within [2, {search_upto}]; "
            "retry with a larger search range"
        )
    for k in chosen:
        for n in range(1, min(k - 1, stability_window) + 1):
            sign = _removal_margin_sign(desc, n, k, width, cap)
            if sign is None:
                raise UndecidedAtCapError(
                    f"removal stability at n={n} after removing k={k} undecided", index=n
                )
            if sign <= 0:
                raise DomainError(
                    f"removing index {k} breaks tail dominance at n={n}"
                )
    return BranchPlan(tuple(chosen), _budget_certificate(desc, x, plan_sum, width, cap))


def verify_branch_plan(
    desc: SequenceDescriptor,
    x: TargetValue,
    plan: BranchPlan,
    *,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Exhaustively certify that every 0/1 pattern over the plan's indices
    leaves a feasible completion: ``0 <= x - dot <= S - plan_sum``."""
    terms = [desc.term(i) for i in plan.indices]
    plan_sum = _QR_ZERO
    for t in terms:
        plan_sum = plan_sum + t
    for mask in range(1 << len(terms)):
        dot = _QR_ZERO
        for j, t in enumerate(terms):
            if mask >> j & 1:
                dot = dot + t
        s1 = _sign_of(desc, -dot, x=x, x_coef=1, cap=cap)
        if s1 is None:
            raise UndecidedAtCapError(f"pattern {mask:b}: lower bound undecided", index=mask)
        if s1 < 0:
            return False
        s2 = _sign_of(
            desc, plan_sum - dot, x=x, x_coef=1, tail_index=0, tail_coef=-1, cap=cap
        )
        if s2 is None:
            raise UndecidedAtCapError(f"pattern {mask:b}: upper bound undecided", index=mask)
        if s2 > 0:
            return False
    return True


def digit_frequency(prefix: DigitPrefix) -> FrequencyResult:
    """Exact digit counts and the ratio of ones to length."""
    if len(prefix) == 0:
        raise DomainError("frequency of an empty prefix is undefined")
    ones = sum(prefix.bits)
    return FrequencyResult(ones=ones, zeros=len(prefix) - ones, ratio=Fraction(ones, len(prefix)))


# -- certificate text form ----------------------------------------------------

_CERT_HEADER = "kakeya-certificate v1"


def certificate_to_text(cert: ExpansionCertificate) -> str:
    """Line-oriented text form; round-trips bit-exactly through
    :func:`certificate_from_text` for serializable descriptors/targets."""
    label = cert.target.label()
    if label is None:
        raise DomainError("enclosure-only targets are not serializable")
    desc_label = cert.desc.label()
    if desc_label.startswith("custom["):
        raise DomainError("custom sequences without a source path are not serializable")
    return (
        f"{_CERT_HEADER}\n"
        f"seq: {desc_label}\n"
        f"target: {label}\n"
        f"bits: {cert.prefix}\n"
        f"residual: {cert.residual_enclosure.lo} {cert.residual_enclosure.hi}\n"
        f"feasible: {cert.feasible.value}\n"
    )


def certificate_from_text(text: str) -> ExpansionCertificate:
    lines = [ln.rstrip("\n") for ln in text.splitlines()]
    if not lines or lines[0] != _CERT_HEADER:
        raise ParseError("missing certificate header")
    fields: dict[str, str] = {}
    for ln in lines[1:]:
        if not ln.strip():
            continue
        key, sep, value = ln.partition(":")
        if not sep:
            raise ParseError(f"malformed certificate line: {ln!r}")
        fields[key.strip()] = value.strip()
    for required in ("seq", "target", "bits", "residual", "feasible"):
        if required not in fields:
            raise ParseError(f"certificate missing field {required!r}")
    desc = parse_descriptor(fields["seq"])
    target = (
        TargetValue.sequence_sum(desc)
        if fields["target"] == "S"
        else TargetValue.from_exact(parse_scalar(fields["target"]))
    )
    prefix = DigitPrefix.from_string(fields["bits"]) if fields["bits"] else DigitPrefix()
    parts = fields["residual"].split()
    if len(parts) != 2:
        raise ParseError(f"malformed residual line: {fields['residual']!r}")
    residual = Interval(parse_rational(parts[0]), parse_rational(parts[1]))
    try:
        verdict = Feasibility(fields["feasible"])
    except ValueError as exc:
        raise ParseError(f"unknown feasibility verdict {fields['feasible']!r}") from exc
    return ExpansionCertificate(
        desc=desc,
        target=target,
        prefix=prefix,
        partial=_partial_sum(desc, prefix),
        residual_enclosure=residual,
        feasible=verdict,
    )
