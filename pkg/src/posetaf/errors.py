"""Domain errors shared across the package.

Every precondition failure raises a subclass of :class:`DomainError` so the
CLI can map them uniformly to exit code 1.
"""


class DomainError(Exception):
    """Base class for all domain-level failures."""


class CycleError(DomainError):
    """Cover pairs contain a directed cycle; carries a witness in args."""


class UnknownLabel(DomainError):
    pass


class EmptyPosetError(DomainError):
    pass


class TooLarge(DomainError):
    """Input exceeds a configured enumeration bound."""


class ShapeMismatch(DomainError):
    pass


class NotAnIdeal(DomainError):
    pass


class NoTail(DomainError):
    pass


class NotAForest(DomainError):
    pass


class NotClosed(DomainError):
    pass


class InvalidDefector(DomainError):
    pass


class IncompleteRelabeling(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class FactorizationMismatch(DomainError):
    """Internal consistency failure between a direct sum and its factored form."""


class ParseError(DomainError):
    pass
