"""Exception taxonomy shared by all engine modules."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every error raised by this package."""


class ParseError(EngineError):
    """A document could not be parsed (malformed JSON, wrong shape)."""


class ValidationError(EngineError):
    """A parsed document or constructed object violates an invariant."""


class TypeMismatch(EngineError):
    """A numeric requirement hit a text attribute, or vice versa."""


class InvalidMatrix(EngineError):
    """Pairwise comparison matrix violates reciprocity, scale or shape."""


class MissingMatrix(EngineError):
    """An internal hierarchy node has no pairwise comparisons."""


class NegativeValue(EngineError):
    """Criterion normalization received a negative input."""


class EmptyRanking(EngineError):
    """An operation that needs a non-empty ranking received an empty one."""


class UnknownComponent(EngineError):
    """Referenced component id is not part of the formation."""


class AlreadyCommitted(EngineError):
    """The component already has a committed solution."""


class NotEvaluated(EngineError):
    """Commit attempted before any evaluation results exist."""


class InfeasibleSelection(EngineError):
    """Commit attempted for a pair that is not feasible in the last results."""


class NoFeasibleCombination(EngineError):
    """Every enumerated image/service pair is infeasible."""


class VersionConflict(EngineError):
    """Optimistic concurrency check failed (stale session version)."""
