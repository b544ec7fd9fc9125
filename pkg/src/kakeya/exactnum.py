"""Exact scalar arithmetic: big rationals, the field Q(sqrt 5), and
rational-endpoint interval enclosures.

Three layers, all immutable and free of floating point:

* ``Rational`` -- arbitrary-precision reduced fractions (the stdlib
  ``fractions.Fraction``; always stored reduced with positive denominator).
* ``QuadRat`` -- elements ``a + b*sqrt(5)`` with rational ``a``, ``b``.
  This field contains the golden ratio ``PHI = (1+sqrt5)/2`` and is closed
  under ``+ - * /``, so every comparison against golden-ratio powers is
  decidable exactly via :func:`quad_sign`.
* ``Interval`` -- conservative enclosures ``[lo, hi]`` with rational
  endpoints, used wherever a value (an infinite series tail, say) is only
  reachable by refinement.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, ParseError

# Arbitrary-precision reduced fraction; invariants (gcd == 1, denominator > 0)
# are maintained by the stdlib type itself.
Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class QuadRat:
    """An element ``a + b*sqrt(5)`` of the real quadratic field Q(sqrt5).

    The representation is unique: two values are equal as reals iff their
    ``(a, b)`` pairs are equal, because sqrt(5) is irrational.
    """

    a: Fraction
    b: Fraction = _ZERO

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))

    @classmethod
    def from_rational(cls, value) -> "QuadRat":
        return cls(_as_fraction(value), _ZERO)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def rational_value(self) -> Fraction:
        """The value as a plain fraction; only defined when ``b == 0``."""
        if self.b != 0:
            raise DomainError(f"{self} is irrational")
        return self.a

    # -- ring/field operations -------------------------------------------

    @staticmethod
    def _coerce(other) -> "QuadRat | None":
        if isinstance(other, QuadRat):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(_as_fraction(other), _ZERO)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(o.a - self.a, o.b - self.b)

    def __neg__(self) -> "QuadRat":
        return QuadRat(-self.a, -self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 5*b**2``; zero iff the value is zero."""
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return QuadRat(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int) -> "QuadRat":
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        n = abs(exponent)
        result = QuadRat(_ONE, _ZERO)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- exact ordering ---------------------------------------------------

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt5``, decided exactly.

        Case analysis on the signs of ``a`` and ``b``; in the mixed case the
        comparison of ``a**2`` with ``5*b**2`` settles which summand wins.
        """
        sa, sb = _sgn(self.a), _sgn(self.b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # a and b pull in opposite directions: sign(x) * sign(conjugate) = sign(norm)
        return sa * _sgn(self.norm())

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QuadRat({self.a!r}, {self.b!r})"


SQRT5 = QuadRat(_ZERO, _ONE)
PHI = QuadRat(Fraction(1, 2), Fraction(1, 2))


def quad_sign(x: QuadRat) -> int:
    """Sign in ``{-1, 0, +1}`` of ``x`` as a real number, decided exactly."""
    return x.sign()


class IntervalOrder(Enum):
    LT = "LT"
    GT = "GT"
    OVERLAP = "OVERLAP"


@dataclass(frozen=True)
class Interval:
    """A closed interval ``[lo, hi]`` with rational endpoints.

    Interval results are outward-conservative: the true real value of any
    operation on enclosed reals lies inside the result.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @classmethod
    def point(cls, value) -> "Interval":
        v = _as_fraction(value)
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        v = _as_fraction(value)
        return self.lo <= v <= self.hi

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        if isinstance(other, (int, Fraction)):
            v = _as_fraction(other)
            return Interval(self.lo + v, self.hi + v)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval(self.lo - other.hi, self.hi - other.lo)
        if isinstance(other, (int, Fraction)):
            v = _as_fraction(other)
            return Interval(self.lo - v, self.hi - v)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            v = _as_fraction(other)
            return Interval(v - self.hi, v - self.lo)
        return NotImplemented

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def scale(self, factor) -> "Interval":
        """Multiply by an exact rational scalar (sign-aware)."""
        f = _as_fraction(factor)
        if f >= 0:
            return Interval(self.lo * f, self.hi * f)
        return Interval(self.hi * f, self.lo * f)

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise DomainError("intersection of disjoint intervals (nesting violated)")
        return Interval(lo, hi)


def interval_cmp(x: Interval, y: Interval) -> IntervalOrder:
    """LT iff ``x`` is certainly below ``y``; GT iff certainly above;
    OVERLAP otherwise (the caller must refine)."""
    if x.hi < y.lo:
        return IntervalOrder.LT
    if x.lo > y.hi:
        return IntervalOrder.GT
    return IntervalOrder.OVERLAP


def dyadic_outward(iv: Interval, grain) -> Interval:
    """Round endpoints outward onto a dyadic grid of pitch <= ``grain``.

    Exact series partial sums carry reduced denominators that grow without
    bound; snapping enclosure endpoints outward keeps them conservative while
    bounding their size by the requested precision.
    """
    g = _as_fraction(grain)
    if g <= 0:
        raise DomainError("grain must be positive")
    scale = 1 << (g.denominator // g.numerator).bit_length()
    lo = Fraction(math.floor(iv.lo * scale), scale)
    hi = Fraction(-math.floor(-iv.hi * scale), scale)
    return Interval(lo, hi)


# -- sqrt(5) enclosure -----------------------------------------------------

_sqrt5_lock = threading.Lock()
_sqrt5_best = Interval(Fraction(2), Fraction(3))


def sqrt5_enclosure(width) -> Interval:
    """Rational enclosure of sqrt(5) with ``hi - lo <= width``.

    Refined by bisection from the initial bracket [2, 3]; successive calls
    share (and only ever narrow) a global bracket.
    """
    w = _as_fraction(width)
    if w <= 0:
        raise DomainError("width must be positive")
    global _sqrt5_best
    with _sqrt5_lock:
        lo, hi = _sqrt5_best.lo, _sqrt5_best.hi
        while hi - lo > w:
            mid = (lo + hi) / 2
            if mid * mid < 5:
                lo = mid
            else:
                hi = mid
        _sqrt5_best = Interval(lo, hi)
        return _sqrt5_best


def quad_to_interval(x: QuadRat, width) -> Interval:
    """Enclosure of ``x`` with ``hi - lo <= width``; exact when ``b == 0``."""
    w = _as_fraction(width)
    if w <= 0:
        raise DomainError("width must be positive")
    if x.b == 0:
        return Interval.point(x.a)
    root = sqrt5_enclosure(w / abs(x.b))
    lo = x.a + x.b * (root.lo if x.b > 0 else root.hi)
    hi = x.a + x.b * (root.hi if x.b > 0 else root.lo)
    return Interval(lo, hi)


# -- text syntax -----------------------------------------------------------
#
# Scalars print and parse in three forms, all round-tripping bit-exactly:
#   "17"                  integer
#   "3/7", "-3/7"         fraction
#   "1/2+1/2*sqrt5"       quadratic  (also "0-2/3*sqrt5" etc.)

_FRACTION_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")
_QUAD_RE = re.compile(r"^([+-]?\d+(?:/[1-9]\d*)?)([+-])(\d+(?:/[1-9]\d*)?)\*sqrt5$")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not _FRACTION_RE.match(s):
        raise ParseError(f"not a rational literal: {text!r}")
    return Fraction(s)


def parse_scalar(text: str) -> QuadRat:
    """Parse an integer, fraction, or ``a+b*sqrt5`` literal."""
    s = text.strip().replace(" ", "")
    m = _QUAD_RE.match(s)
    if m:
        a = Fraction(m.group(1))
        b = Fraction(m.group(3))
        if m.group(2) == "-":
            b = -b
        return QuadRat(a, b)
    if _FRACTION_RE.match(s):
        return QuadRat(Fraction(s), _ZERO)
    raise ParseError(f"not a scalar literal: {text!r}")


def format_scalar(x) -> str:
    """Canonical text for a scalar; ``parse_scalar`` inverts it bit-exactly."""
    if isinstance(x, (int, Fraction)):
        return str(_as_fraction(x))
    if x.b == 0:
        return str(x.a)
    sign = "+" if x.b > 0 else "-"
    return f"{x.a}{sign}{abs(x.b)}*sqrt5"
