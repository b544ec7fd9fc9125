"""Big-integer Fibonacci numbers and exact certificates for the classical
identities the expansion machinery relies on (Cassini, Binet nearest-integer,
the doubling bound, the odd-index tail gap, and the reciprocal sum constant).

Indexing starts at 1: ``F_1 = F_2 = 1``. All verdicts are decided in exact
arithmetic; no floating point appears anywhere.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import NamedTuple

from .errors import DomainError, UndecidedAtCapError
from .exactnum import PHI, Interval, QuadRat, quad_sign

_fib_lock = threading.Lock()
_fib_values = [1, 1]  # _fib_values[i-1] == F_i; append-only


def fib(n: int) -> int:
    """The n-th Fibonacci number, ``n >= 1``."""
    if n < 1:
        raise DomainError(f"Fibonacci index must be >= 1, got {n}")
    if n > len(_fib_values):
        with _fib_lock:
            while len(_fib_values) < n:
                _fib_values.append(_fib_values[-1] + _fib_values[-2])
    return _fib_values[n - 1]


def cassini_check(n: int) -> bool:
    """Whether ``F_n**2 == F_{n-1} * F_{n+1} + (-1)**(n+1)`` holds exactly."""
    if n < 2:
        raise DomainError(f"Cassini check needs n >= 2, got {n}")
    return fib(n) ** 2 == fib(n - 1) * fib(n + 1) + (-1) ** (n + 1)


_INV_SQRT5 = QuadRat(Fraction(0), Fraction(1, 5))  # 1/sqrt5 == sqrt5/5
_HALF = QuadRat(Fraction(1, 2))


def binet_nearest_check(n: int) -> bool:
    """Certify two facts about ``F_n`` and the golden ratio, both exactly:

    * the closed form ``F_n == (phi**n + (-1)**(n+1) * phi**(-n)) / sqrt5``
      holds as an identity in Q(sqrt5);
    * ``F_n`` is the nearest integer to ``phi**n / sqrt5``, i.e. the
      difference has absolute value below 1/2.
    """
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    phi_n = PHI ** n
    closed_form = (phi_n + (-1) ** (n + 1) * PHI ** (-n)) * _INV_SQRT5
    if closed_form != QuadRat(Fraction(fib(n))):
        return False
    diff = QuadRat(Fraction(fib(n))) - phi_n * _INV_SQRT5
    return quad_sign(_HALF - diff) > 0 and quad_sign(diff + _HALF) > 0


class DoublingResult(NamedTuple):
    holds: bool
    equality: bool


def doubling_check(n: int) -> DoublingResult:
    """Whether ``F_{n+1} <= 2 * F_n``, with the equality case flagged
    (it occurs at n = 2 only)."""
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    lhs, rhs = fib(n + 1), 2 * fib(n)
    return DoublingResult(holds=lhs <= rhs, equality=lhs == rhs)


def odd_index_tail_check(k: int, width: Fraction | None = None, cap: int = 40) -> bool:
    """Certify ``1/F_k < sum_{i >= k+2} 1/F_i`` for odd ``k``.

    The two sides agree to roughly the cube of the terms, so the default
    starting width is ``1/(F_k * F_{k+1} * F_{k+2})``; from there the tail
    enclosure is halved until it separates. Failure to separate within the
    cap raises (it cannot happen for valid odd ``k`` and indicates a bug).
    """
    if k < 1 or k % 2 == 0:
        raise DomainError(f"k must be a positive odd integer, got {k}")
    from .sequences import FibonacciReciprocal

    desc = FibonacciReciprocal()
    value = Fraction(1, fib(k))
    w = Fraction(width) if width is not None else Fraction(1, fib(k) * fib(k + 1) * fib(k + 2))
    enclosure = None
    for _ in range(max(cap, 1)):
        enclosure = desc.tail_enclosure(k + 1, w)
        if value < enclosure.lo:
            return True
        if value > enclosure.hi:
            return False
        w /= 2
    raise UndecidedAtCapError(
        f"odd-index tail comparison at k={k} undecided at cap", best=enclosure, index=k
    )


def s_constant(width) -> Interval:
    """Enclosure of ``S = sum_{i >= 1} 1/F_i`` with ``hi - lo <= width``."""
    from .sequences import FibonacciReciprocal

    return FibonacciReciprocal().tail_enclosure(0, width)
