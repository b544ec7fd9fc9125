"""Exception types shared across the library.

Every error a caller can act on is a distinct class; nothing here is ever
used for control flow that silently swallows an undecided comparison.
"""

from __future__ import annotations


class KakeyaError(Exception):
    """Base class for all library errors."""


class DomainError(KakeyaError):
    """A precondition on the mathematical domain was violated (and certified)."""


class ParseError(DomainError):
    """Malformed scalar, descriptor, or certificate text."""


class UndecidedAtCapError(KakeyaError):
    """A comparison or enclosure could not be decided within the refinement cap.

    Carries the best enclosure reached so the caller can retry with a larger
    cap or smaller width instead of guessing.
    """

    def __init__(self, message: str, best=None, index: int | None = None):
        super().__init__(message)
        self.best = best
        self.index = index


class InsufficientBranchingError(DomainError):
    """Fewer distinct feasible prefixes exist than were requested.

    ``achievable`` is the count that could actually be produced.
    """

    def __init__(self, message: str, achievable: int):
        super().__init__(message)
        self.achievable = achievable


class BranchPlanError(DomainError):
    """A branch plan with the requested size cannot be certified in the
    searched index range."""


class PartitionInvariantError(KakeyaError):
    """Both bins of the two-bin partition were certified infeasible.

    This cannot happen for a sequence with the Kakeya property; reaching it
    means the descriptor violates the property or the library has a bug.
    """
