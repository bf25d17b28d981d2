"""Exception hierarchy.

Every error a caller can trigger with bad mathematical input derives from
``DomainError``; the CLI maps those to exit code 1.
"""


class DomainError(Exception):
    pass


class EmptyWord(DomainError):
    pass


class ContextMismatch(DomainError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class NotAdjacent(DomainError):
    pass


class InvalidChain(DomainError):
    pass


class InvalidSubpoint(DomainError):
    pass


class NotInComponent(DomainError):
    pass


class NotInChart(DomainError):
    pass


class FrozenVertex(DomainError):
    pass


class DemazureNotLongest(DomainError):
    pass


class Unsupported(DomainError):
    pass


class NotOnVariety(DomainError):
    pass


class NoDeepPoints(DomainError):
    pass


class ChartSearchFailed(DomainError):
    """The chart search exhausted its budget without a certificate."""


class InternalError(RuntimeError):
    """An invariant that the mathematics guarantees was violated."""
