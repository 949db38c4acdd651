"""Exception hierarchy. Every error carries an optional witness for diagnostics."""

from __future__ import annotations


class ResposError(Exception):
    """Base class for all errors raised by respos."""

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class NonSquareTable(ResposError, ValueError):
    pass


class CycleDetected(ResposError, ValueError):
    pass


class NotAssociative(ResposError, ValueError):
    pass


class NotResiduated(ResposError, ValueError):
    pass


class UnknownSymbol(ResposError, KeyError):
    pass


class ArityMismatch(ResposError, ValueError):
    pass


class PreconditionError(ResposError, ValueError):
    """An operation was called on an input outside its documented domain."""


class MissingUnit(PreconditionError):
    pass


class NotPositiveIdempotent(PreconditionError):
    pass


class NotBalancedOverI(PreconditionError):
    pass


class NotSteadyOverI(PreconditionError):
    pass


class NoCentralPositiveIdempotent(PreconditionError):
    pass


class NotAMonoid(PreconditionError):
    pass


class ZeroNotBelowUnit(PreconditionError):
    pass


class MissingEdge(ResposError, ValueError):
    pass


class NoLeastIndex(ResposError, ValueError):
    pass


class InvalidSystem(PreconditionError):
    pass


class UnknownExample(ResposError, KeyError):
    pass


class SizeCapExceeded(ResposError, ValueError):
    pass


class InconsistencyError(ResposError, AssertionError):
    """Two routes that must agree by theorem disagreed: an implementation bug."""


class SchemaError(ResposError, ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SemanticError(ResposError, ValueError):
    pass
