"""Sequence families with exact term access, rigorous tail enclosures, and
the hypothesis checks a binary expansion system rests on.

A descriptor names a positive sequence ``(p_i)`` whose terms are exact
elements of Q(sqrt5). Tails ``T_n = sum_{i > n} p_i`` are never evaluated in
floating point: each family either has an exact closed form or a rigorous
two-sided bracket that narrows on demand. Every check below compares exact
terms against such enclosures and reports one verdict per index; comparisons
that stay undecided at the refinement cap are surfaced, never guessed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, NamedTuple

from .errors import DomainError, ParseError, UndecidedAtCapError
from .exactnum import (
    PHI,
    Interval,
    QuadRat,
    dyadic_outward,
    format_scalar,
    parse_rational,
    parse_scalar,
    quad_sign,
    quad_to_interval,
)
from .fibonacci import fib

DEFAULT_CAP = 40
DEFAULT_WIDTH = Fraction(1, 1024)

_QR_ZERO = QuadRat(Fraction(0))
_QR_ONE = QuadRat(Fraction(1))


@dataclass(frozen=True)
class PerturbationRule:
    """A named multiplicative perturbation ``i -> eps_i`` with certified
    bounds ``eps_inf <= eps_i <= eps_sup`` (and ``eps_inf > -1``)."""

    name: str
    eps: Callable[[int], QuadRat]
    eps_inf: QuadRat
    eps_sup: QuadRat

    def __post_init__(self):
        if quad_sign(self.eps_inf + 1) <= 0:
            raise DomainError("perturbation bounds require eps_inf > -1")
        if quad_sign(self.eps_sup - self.eps_inf) < 0:
            raise DomainError("perturbation bounds require eps_inf <= eps_sup")


def _golden_binet_eps(i: int) -> QuadRat:
    return QuadRat(Fraction(fib(i))) * PHI ** (-i) - 1


# The multiplicative correction that turns golden-ratio powers into Fibonacci
# denominators: 1 + eps_i = F_i / phi**i, so 1/(phi**i * (1 + eps_i)) == 1/F_i
# exactly. The bounds are attained at i = 2 (inf) and i = 1 (sup), and
# (1 + eps_inf)/(1 + eps_sup) equals phi - 1 exactly.
GOLDEN_BINET = PerturbationRule(
    name="golden-binet",
    eps=_golden_binet_eps,
    eps_inf=PHI ** (-2) - 1,
    eps_sup=PHI ** (-1) - 1,
)

# -- tail and head caches ---------------------------------------------------

_cache_lock = threading.Lock()
_tail_cache: dict[tuple["SequenceDescriptor", int], Interval] = {}
_head_cache: dict["SequenceDescriptor", list[QuadRat]] = {}


class SequenceDescriptor:
    """Base class: a positive sequence with exact terms and refinable tails.

    Instances are immutable value objects; all methods are pure. Shared
    tail/head caches are append-only and guarded by a lock, so concurrent
    use observes exactly the sequential behaviour.
    """

    def term(self, i: int) -> QuadRat:
        raise NotImplementedError

    def tail_exact(self, n: int) -> QuadRat | None:
        """Closed-form tail when the family has one (geometric); else None."""
        return None

    def _tail_bracket(self, n: int, width: Fraction) -> Interval:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def head(self, n: int) -> QuadRat:
        """Exact partial sum ``sum_{i <= n} p_i`` (cached, append-only)."""
        if n < 0:
            raise DomainError(f"head index must be >= 0, got {n}")
        with _cache_lock:
            sums = _head_cache.setdefault(self, [_QR_ZERO])
            if n < len(sums):
                return sums[n]
        # grow outside the lock; term() may recurse into caches
        with _cache_lock:
            sums = _head_cache[self]
            while len(sums) <= n:
                sums.append(sums[-1] + self.term(len(sums)))
            return sums[n]

    def tail_enclosure(self, n: int, width) -> Interval:
        """Enclosure of ``T_n = sum_{i > n} p_i`` with ``hi - lo <= width``.

        Successive results for the same index are intersected, so callers
        always observe nested enclosures.
        """
        w = Fraction(width)
        if w <= 0:
            raise DomainError("width must be positive")
        if n < 0:
            raise DomainError(f"tail index must be >= 0, got {n}")
        exact = self.tail_exact(n)
        if exact is not None:
            return quad_to_interval(exact, w)
        key = (self, n)
        with _cache_lock:
            cached = _tail_cache.get(key)
        if cached is not None and cached.width <= w:
            return cached
        try:
            fresh = self._tail_bracket(n, w)
        except UndecidedAtCapError as err:
            if cached is not None and err.best is not None:
                err.best = err.best.intersect(cached)
            with _cache_lock:
                if err.best is not None:
                    _tail_cache[key] = err.best
            raise
        merged = fresh if cached is None else fresh.intersect(cached)
        with _cache_lock:
            _tail_cache[key] = merged
        return merged


@dataclass(frozen=True)
class Geometric(SequenceDescriptor):
    """``p_i = q**(-i)`` for an exact ``q > 1`` (possibly quadratic)."""

    q: QuadRat

    def __post_init__(self):
        q = self.q if isinstance(self.q, QuadRat) else QuadRat(Fraction(self.q))
        object.__setattr__(self, "q", q)
        if quad_sign(q - 1) <= 0:
            raise DomainError(f"geometric base must exceed 1, got {format_scalar(q)}")

    def term(self, i: int) -> QuadRat:
        if i < 1:
            raise DomainError(f"term index must be >= 1, got {i}")
        return self.q ** (-i)

    def tail_exact(self, n: int) -> QuadRat:
        # sum_{i > n} q**(-i) == q**(-n) / (q - 1)
        return self.q ** (-n) / (self.q - 1)

    def label(self) -> str:
        return f"geometric:{format_scalar(self.q)}"


@dataclass(frozen=True)
class FibonacciReciprocal(SequenceDescriptor):
    """``p_i = 1/F_i``: reciprocals of the Fibonacci numbers."""

    def term(self, i: int) -> QuadRat:
        if i < 1:
            raise DomainError(f"term index must be >= 1, got {i}")
        return QuadRat(Fraction(1, fib(i)))

    def _tail_bracket(self, n: int, width: Fraction) -> Interval:
        # Term ratios p_{i+1}/p_i = F_i/F_{i+1} lie in [1/2, 2/3] from i = 2
        # on (both ends of the doubling bound), so the remainder beyond a
        # cutoff M >= 1 lies in [2/F_{M+1}, 3/F_{M+1}]. The bracket width is
        # exactly 1/F_{M+1}; grow M until it meets the request. Endpoints are
        # snapped outward to a dyadic grid so their size tracks the width
        # instead of the partial sum's reduced denominator.
        m = max(n, 1)
        half = Fraction(width, 2)
        while Fraction(1, fib(m + 1)) > half:
            m += 1
        partial = (self.head(m) - self.head(n)).rational_value
        bracket = Interval(partial + Fraction(2, fib(m + 1)), partial + Fraction(3, fib(m + 1)))
        return dyadic_outward(bracket, Fraction(width, 8))

    def label(self) -> str:
        return "fibonacci"


@dataclass(frozen=True)
class PerturbedGeometric(SequenceDescriptor):
    """``p_i = 1 / (q**i * (1 + eps_i))`` for ``1 < q < 2`` and a rule with
    certified bounds on ``eps``."""

    q: QuadRat
    rule: PerturbationRule

    def __post_init__(self):
        q = self.q if isinstance(self.q, QuadRat) else QuadRat(Fraction(self.q))
        object.__setattr__(self, "q", q)
        if quad_sign(q - 1) <= 0 or quad_sign(2 - q) <= 0:
            raise DomainError(f"perturbed-geometric base must lie in (1, 2), got {format_scalar(q)}")

    def term(self, i: int) -> QuadRat:
        if i < 1:
            raise DomainError(f"term index must be >= 1, got {i}")
        eps = self.rule.eps(i)
        if quad_sign(eps - self.rule.eps_inf) < 0 or quad_sign(self.rule.eps_sup - eps) < 0:
            raise DomainError(f"perturbation rule violates its own bounds at i={i}")
        return (self.q ** i * (eps + 1)).inverse()

    def _tail_bracket(self, n: int, width: Fraction) -> Interval:
        # Each term lies between the two geometric envelopes taken at the
        # eps bounds, so the remainder beyond M is bracketed by
        #   q**(-M)/((q-1)(1+eps_sup))  and  q**(-M)/((q-1)(1+eps_inf)).
        inv_gap = (self.q - 1).inverse()
        lo_env = inv_gap / (self.rule.eps_sup + 1)
        hi_env = inv_gap / (self.rule.eps_inf + 1)
        m = n
        q_pow = self.q ** (-m)
        half = Fraction(width, 2)
        while quad_sign(q_pow * (hi_env - lo_env) - half) > 0:
            m += 1
            q_pow = q_pow / self.q
        partial = self.head(m) - self.head(n)
        sixteenth = Fraction(width, 16)
        lo = quad_to_interval(partial + q_pow * lo_env, sixteenth).lo
        hi = quad_to_interval(partial + q_pow * hi_env, sixteenth).hi
        return dyadic_outward(Interval(lo, hi), sixteenth)

    def label(self) -> str:
        if self.rule is GOLDEN_BINET and self.q == PHI:
            return "perturbed-golden"
        return f"perturbed:{format_scalar(self.q)}:{self.rule.name}"


@dataclass(frozen=True)
class CustomFinite(SequenceDescriptor):
    """A user-supplied finite prefix of positive rational terms.

    The continuation is known only through caller-certified ratio bounds
    ``0 < lo <= p_{i+1}/p_i <= hi < 1`` (from the last listed term onward);
    tails are honest fixed brackets derived from those bounds, and a width
    request below what the bounds can deliver fails loudly rather than
    fabricating precision.
    """

    terms: tuple[Fraction, ...]
    tail_ratio: tuple[Fraction, Fraction]

    def __post_init__(self):
        terms = tuple(Fraction(t) for t in self.terms)
        ratio = (Fraction(self.tail_ratio[0]), Fraction(self.tail_ratio[1]))
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "tail_ratio", ratio)
        if not terms:
            raise DomainError("custom sequence needs at least one term")
        if any(t <= 0 for t in terms):
            raise DomainError("custom sequence terms must be strictly positive")
        lo, hi = ratio
        if not (0 < lo <= hi < 1):
            raise DomainError(f"tail ratio bounds must satisfy 0 < lo <= hi < 1, got {lo},{hi}")

    def term(self, i: int) -> QuadRat:
        if i < 1:
            raise DomainError(f"term index must be >= 1, got {i}")
        if i > len(self.terms):
            raise DomainError(
                f"term index {i} out of range for custom sequence of length {len(self.terms)}"
            )
        return QuadRat(self.terms[i - 1])

    def _tail_bracket(self, n: int, width: Fraction) -> Interval:
        llen = len(self.terms)
        last = self.terms[-1]
        rlo, rhi = self.tail_ratio
        if n >= llen:
            j = n - llen + 1
            lo = last * rlo ** j / (1 - rlo)
            hi = last * rhi ** j / (1 - rhi)
        else:
            partial = sum(self.terms[n:llen], Fraction(0))
            lo = partial + last * rlo / (1 - rlo)
            hi = partial + last * rhi / (1 - rhi)
        bracket = Interval(lo, hi)
        if bracket.width > width:
            raise UndecidedAtCapError(
                f"custom tail bracket width {bracket.width} exceeds requested {width}; "
                "the ratio bounds cannot be refined further",
                best=bracket,
                index=n,
            )
        return bracket

    def label(self) -> str:
        return f"custom[{len(self.terms)} terms]"


# -- certified comparisons --------------------------------------------------


def certified_sign(
    desc: SequenceDescriptor,
    const: QuadRat,
    s_coef: int = 0,
    *,
    extra: Callable[[Fraction], Interval] | None = None,
    cap: int = DEFAULT_CAP,
    start_width: Fraction = DEFAULT_WIDTH,
) -> tuple[int | None, Interval]:
    """Sign of ``const + s_coef * S + extra`` where ``S`` is the full series
    sum of ``desc`` and ``extra`` is an optional refinable value.

    Returns ``(sign, witness)``; the sign is None when the enclosure still
    straddles zero after ``cap`` halvings of the width. Exact inputs
    (``s_coef == 0`` and no ``extra``) are decided by :func:`quad_sign`
    without any refinement, so equality is only ever reported exactly.
    """
    if s_coef == 0 and extra is None:
        return quad_sign(const), quad_to_interval(const, start_width)
    w = start_width
    witness = None
    for _ in range(max(cap, 1)):
        iv = quad_to_interval(const, w)
        if s_coef:
            try:
                tail = desc.tail_enclosure(0, w)
            except UndecidedAtCapError as err:
                tail = err.best  # fixed-width bracket; still conservative
            iv = iv + tail.scale(s_coef)
        if extra is not None:
            iv = iv + extra(w)
        witness = iv
        if iv.lo > 0:
            return 1, iv
        if iv.hi < 0:
            return -1, iv
        w /= 2
    return None, witness


def near_tie_width(desc: SequenceDescriptor, n: int, width: Fraction) -> Fraction:
    """Starting width for comparisons that may be tight at index ``n``.

    Index-n term-versus-tail gaps can shrink like the cube of the terms
    (they do for the Fibonacci family), far below any fixed default; start
    at the cube of the first tail term so the cap is spent on constant
    factors, not on orders of magnitude.
    """
    try:
        iv = quad_to_interval(desc.term(n + 1), Fraction(1, 64))
    except DomainError:
        return width
    lo = iv.lo
    if lo <= 0:
        lo = Fraction(1, 1 << (2 * n + 8))
    return min(width, lo ** 3)


# -- check reports ------------------------------------------------------------


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided-at-cap"


@dataclass(frozen=True)
class CheckReport:
    """Per-index verdicts for a property over a contiguous index range.

    Every FAILS or UNDECIDED index carries a witness enclosure of the margin
    that was being decided. A finite report certifies exactly the indices it
    covers, nothing beyond; ``note`` spells out any extra context.
    """

    property_name: str
    first: int
    last: int
    verdicts: tuple[Verdict, ...]
    witnesses: dict[int, Interval] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.last - self.first + 1 != len(self.verdicts):
            raise DomainError("verdict count must equal the index range length")
        for idx, v in enumerate(self.verdicts, start=self.first):
            if v is not Verdict.HOLDS and idx not in self.witnesses:
                raise DomainError(f"index {idx} verdict {v.value} lacks a witness")

    def verdict(self, index: int) -> Verdict:
        if not self.first <= index <= self.last:
            raise DomainError(f"index {index} outside [{self.first}, {self.last}]")
        return self.verdicts[index - self.first]

    @property
    def all_hold(self) -> bool:
        return all(v is Verdict.HOLDS for v in self.verdicts)

    def indices(self, which: Verdict) -> tuple[int, ...]:
        return tuple(
            i for i, v in zip(range(self.first, self.last + 1), self.verdicts) if v is which
        )


def _margin_verdict(sign: int | None, *, strict: bool) -> Verdict:
    """Map the sign of (tail-side minus term-side) to a verdict."""
    if sign is None:
        return Verdict.UNDECIDED
    if sign > 0:
        return Verdict.HOLDS
    if sign == 0:
        return Verdict.FAILS if strict else Verdict.HOLDS
    return Verdict.FAILS


def _tail_margin_sign(
    desc: SequenceDescriptor,
    value: QuadRat,
    tail_index: int,
    width: Fraction,
    cap: int,
) -> tuple[int | None, Interval]:
    """Certified sign of ``T_{tail_index} - value`` with witness."""
    exact = desc.tail_exact(tail_index)
    if exact is not None:
        margin = exact - value
        return quad_sign(margin), quad_to_interval(margin, width)
    start = near_tie_width(desc, tail_index, width)
    const = -(desc.head(tail_index) + value)
    return certified_sign(desc, const, 1, cap=cap, start_width=start)


def kakeya_check(
    desc: SequenceDescriptor,
    upto: int,
    strict: bool = True,
    width: Fraction = DEFAULT_WIDTH,
    cap: int = DEFAULT_CAP,
) -> CheckReport:
    """Decide ``p_n <= T_n`` (or ``<`` when strict) for every ``n <= upto``."""
    if upto < 1:
        raise DomainError(f"range must reach at least 1, got {upto}")
    width = Fraction(width)
    verdicts, witnesses = [], {}
    for n in range(1, upto + 1):
        sign, witness = _tail_margin_sign(desc, desc.term(n), n, width, cap)
        v = _margin_verdict(sign, strict=strict)
        verdicts.append(v)
        if v is not Verdict.HOLDS:
            witnesses[n] = witness
    name = "kakeya-strict" if strict else "kakeya"
    return CheckReport(name, 1, upto, tuple(verdicts), witnesses)


def special_indices(
    desc: SequenceDescriptor,
    upto: int,
    width: Fraction = DEFAULT_WIDTH,
    cap: int = DEFAULT_CAP,
) -> tuple[set[int], CheckReport]:
    """All ``n`` in ``[2, upto]`` with ``p_{n-1} < T_n``, decided rigorously.

    The report certifies membership for the checked indices only; whether
    special elements recur unboundedly is a property of the family, not of
    any finite window.
    """
    if upto < 2:
        raise DomainError(f"range must reach at least 2, got {upto}")
    width = Fraction(width)
    verdicts, witnesses = [], {}
    members: set[int] = set()
    for n in range(2, upto + 1):
        sign, witness = _tail_margin_sign(desc, desc.term(n - 1), n, width, cap)
        v = _margin_verdict(sign, strict=True)
        verdicts.append(v)
        if v is Verdict.HOLDS:
            members.add(n)
        else:
            witnesses[n] = witness
    note = "finite-range certificate: membership decided for checked indices only"
    if isinstance(desc, FibonacciReciprocal):
        note += (
            "; for this family every even index is special (odd-index tail gap), "
            "so special elements recur unboundedly"
        )
    return members, CheckReport("special-element", 2, upto, tuple(verdicts), witnesses, note)


def ratio_condition_check(desc: SequenceDescriptor, upto: int) -> CheckReport:
    """Decide ``p_n <= 2 * p_{n+1}`` exactly for every ``n <= upto``.

    The condition is asymptotic in nature; the report covers the requested
    window and lists every violation so a threshold is visible to callers.
    """
    if upto < 1:
        raise DomainError(f"range must reach at least 1, got {upto}")
    verdicts, witnesses = [], {}
    for n in range(1, upto + 1):
        margin = 2 * desc.term(n + 1) - desc.term(n)
        sign = quad_sign(margin)
        v = Verdict.HOLDS if sign >= 0 else Verdict.FAILS
        verdicts.append(v)
        if v is Verdict.FAILS:
            witnesses[n] = quad_to_interval(margin, Fraction(1, 1024))
    return CheckReport("ratio-at-most-2", 1, upto, tuple(verdicts), witnesses)


class RhoResult(NamedTuple):
    holds: bool
    rho: QuadRat


def rho_check(desc: SequenceDescriptor, upto: int) -> RhoResult:
    """Exact ``rho_hat = min_{n <= upto} p_{n+1}/p_n`` and whether it exceeds
    ``1/phi`` (= ``phi - 1``)."""
    if upto < 2:
        raise DomainError(f"range must reach at least 2, got {upto}")
    rho: QuadRat | None = None
    prev = desc.term(1)
    for n in range(1, upto + 1):
        nxt = desc.term(n + 1)
        ratio = nxt / prev
        if rho is None or quad_sign(ratio - rho) < 0:
            rho = ratio
        prev = nxt
    return RhoResult(holds=quad_sign(rho - (PHI - 1)) > 0, rho=rho)


class PerturbationResult(NamedTuple):
    holds: bool
    ratio: QuadRat
    equality: bool


def perturbation_check(eps_inf: QuadRat, eps_sup: QuadRat, q: QuadRat) -> PerturbationResult:
    """Decide ``(1 + eps_inf) / (1 + eps_sup) >= q - 1`` exactly.

    This is the criterion under which the perturbed geometric family keeps
    the Kakeya property; the exact ratio is returned alongside the verdict.
    """
    if quad_sign(eps_inf + 1) <= 0:
        raise DomainError("requires eps_inf > -1")
    if quad_sign(eps_sup - eps_inf) < 0:
        raise DomainError("requires eps_inf <= eps_sup")
    if quad_sign(q - 1) <= 0 or quad_sign(2 - q) <= 0:
        raise DomainError(f"requires 1 < q < 2, got {format_scalar(q)}")
    ratio = (eps_inf + 1) / (eps_sup + 1)
    sign = quad_sign(ratio - (q - 1))
    return PerturbationResult(holds=sign >= 0, ratio=ratio, equality=sign == 0)


# -- descriptor text syntax ---------------------------------------------------


def load_custom(path: str) -> CustomFinite:
    """Read a custom sequence file: one rational term per line, then a final
    line ``tail_ratio:lo,hi``."""
    terms: list[Fraction] = []
    ratio: tuple[Fraction, Fraction] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("tail_ratio:"):
                parts = line[len("tail_ratio:"):].split(",")
                if len(parts) != 2:
                    raise ParseError(f"malformed tail_ratio line: {line!r}")
                ratio = (parse_rational(parts[0]), parse_rational(parts[1]))
            else:
                terms.append(parse_rational(line))
    if ratio is None:
        raise ParseError(f"{path}: missing required tail_ratio:lo,hi line")
    return CustomFinite(tuple(terms), ratio)


def parse_descriptor(text: str) -> SequenceDescriptor:
    """Parse ``"geometric:3/2"``, ``"fibonacci"``, ``"perturbed-golden"``,
    or ``"custom:<path>"``."""
    s = text.strip()
    if s == "fibonacci":
        return FibonacciReciprocal()
    if s == "perturbed-golden":
        return PerturbedGeometric(PHI, GOLDEN_BINET)
    if s.startswith("geometric:"):
        return Geometric(parse_scalar(s[len("geometric:"):]))
    if s.startswith("custom:"):
        return load_custom(s[len("custom:"):])
    raise ParseError(f"unknown sequence descriptor: {text!r}")
