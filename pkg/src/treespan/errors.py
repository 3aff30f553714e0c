"""Exception hierarchy.

Input problems derive from :class:`TreespanError`; broken internal invariants
raise :class:`InternalInvariantError`, which always indicates a bug (or a caller
that violated a documented precondition we chose not to check up front).
"""

from __future__ import annotations


class TreespanError(Exception):
    """Base class for every error raised on bad input."""


class TreeValidationError(TreespanError):
    pass


class DanglingArc(TreeValidationError):
    pass


class CycleDetected(TreeValidationError):
    pass


class NodeInDegreeExceeded(TreeValidationError):
    pass


class MultipleRoots(TreeValidationError):
    pass


class UnreachableNode(TreeValidationError):
    pass


class RootMismatch(TreeValidationError):
    """The declared root is not the unique node of in-degree 0."""


class UnknownNode(TreespanError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return Exception.__str__(self)


class OriginMismatch(TreespanError):
    pass


class PreconditionViolation(TreespanError):
    pass


class PartialMapping(TreespanError):
    pass


class ValueOutsideTarget(TreespanError):
    pass


class NotAnEmbedding(TreespanError):
    """Raised when an :class:`~treespan.embeddings.Embedding` is built from a bad map."""

    def __init__(self, message: str, violation=None):
        super().__init__(message)
        self.violation = violation


class TreeMismatch(TreespanError):
    pass


class KindMismatch(TreespanError):
    pass


class CompositionMismatch(TreespanError):
    pass


class CompositionNotClosed(TreespanError):
    """Two homeomorphic embeddings whose composite is not homeomorphic.

    A node with one child in the middle tree may have several children in
    the outer tree, so the concatenated path need not be elementary.
    """

    def __init__(self, msg, violation=None):
        super().__init__(msg)
        self.violation = violation


class BoundExceeded(TreespanError):
    pass


class InvalidCospan(TreespanError):
    pass


class InvalidSpan(TreespanError):
    pass


class NonCommutingProbe(TreespanError):
    pass


class MinorForestUnsupported(TreespanError):
    """Minor cospan whose intersection is a forest: no pullback exists."""


class NotATreeAfterPruning(TreespanError):
    """The pruned join is not a tree; the span apex was not a largest common subtree."""


class NotSmallestSupertree(TreespanError):
    pass


class ParseError(TreespanError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ReservedLabel(ParseError):
    pass


class DuplicateSource(ParseError):
    pass


class InternalInvariantError(AssertionError):
    """A construction produced something its theory says cannot happen."""


class InternalVerificationFailure(InternalInvariantError):
    pass
