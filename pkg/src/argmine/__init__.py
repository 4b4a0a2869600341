"""Argument mining over clinical case exams.

Two-stage pipeline: IOB2 entity spans over sectioned documents, then
zero-shot relation classification between argumentative entities via an
entailment scorer.
"""

from argmine.errors import (
    ArgmineError,
    BadScoresError,
    DuplicateKeyError,
    EmptyInputError,
    FixtureMissError,
    InvariantError,
    OverlapError,
    PatternError,
    ProtocolError,
    SchemaError,
    ScorerTimeoutError,
    ScoringFailedError,
    TagError,
    TransportError,
)

__version__ = "0.1.0"

__all__ = [
    "ArgmineError",
    "BadScoresError",
    "DuplicateKeyError",
    "EmptyInputError",
    "FixtureMissError",
    "InvariantError",
    "OverlapError",
    "PatternError",
    "ProtocolError",
    "SchemaError",
    "ScorerTimeoutError",
    "ScoringFailedError",
    "TagError",
    "TransportError",
    "__version__",
]
