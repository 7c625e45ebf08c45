"""Error types shared across the package.

Domain errors (bad mathematical input, exceeded enumeration budgets,
missing catalog data) are distinguished from plain usage errors so the
CLI can map them to exit status 1 versus 2.
"""


class DomainError(Exception):
    """Base class for all mathematically meaningful failures."""


class RankTooSmallError(DomainError):
    """The target dimension cannot host the requested embedding."""


class CapExceededError(DomainError):
    """An enumeration budget (group size, orbit size, matrix tuples) was hit."""


class MissingDataError(DomainError):
    """A catalog entry lacks the counts or generators the operation needs."""


class UnsupportedFamilyError(DomainError):
    """The family/dimension/field combination is outside what we construct."""
