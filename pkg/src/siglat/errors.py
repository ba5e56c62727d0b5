"""Exception hierarchy shared by every siglat module."""

from __future__ import annotations


class SiglatError(Exception):
    """Base class for all library errors."""


class InvalidPermutation(SiglatError, ValueError):
    pass


class CapExceeded(SiglatError):
    """A desk-scale cap was hit; callers turn this into a skip marker."""


class OrderCapExceeded(CapExceeded):
    pass


class SubgroupCountCapExceeded(CapExceeded):
    pass


class ParentMismatch(SiglatError, ValueError):
    pass


class NotContained(SiglatError, ValueError):
    pass


class NotNormal(SiglatError, ValueError):
    pass


class OrderMismatch(SiglatError, ValueError):
    pass


class ActorDoesNotNormalize(SiglatError, ValueError):
    pass


class NotComparable(SiglatError, ValueError):
    pass


class ElementNotInLattice(SiglatError, KeyError):
    pass


class NotSigmaFull(SiglatError):
    pass


class NotClosed(SiglatError):
    """A subgroup family is not closed under a lattice operation.

    ``a`` and ``b`` are the offending pair and ``result`` the subgroup that
    fell outside the family.
    """

    operation = "?"

    def __init__(self, a, b, result):
        self.a = a
        self.b = b
        self.result = result
        super().__init__(
            f"family not {self.operation}-closed: orders {a.order} and {b.order} "
            f"give a subgroup of order {result.order} outside the family"
        )


class NotMeetClosed(NotClosed):
    operation = "meet"


class NotJoinClosed(NotClosed):
    operation = "join"


class ParseError(SiglatError, ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class OracleDisagreement(SiglatError):
    """Two independent computations of the same object disagree."""
