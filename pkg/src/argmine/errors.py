"""Exception hierarchy shared by every pipeline stage.

Errors split into three families: data errors raised while reading or
validating inputs (SchemaError, InvariantError, TagError, ...), scorer
transport errors raised by the remote entailment client, and usage errors
raised when two aligned inputs disagree (LengthMismatchError,
PairMismatchError). Everything derives from ArgmineError so callers can
catch pipeline failures without masking programming bugs.
"""

from __future__ import annotations


class ArgmineError(Exception):
    """Base class for all pipeline errors."""


class SchemaError(ArgmineError):
    """A record is structurally malformed (wrong type, missing field)."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class InvariantError(ArgmineError):
    """A structurally valid document violates a semantic invariant."""

    def __init__(self, doc_id: str, reason: str):
        self.doc_id = doc_id
        self.reason = reason
        super().__init__(f"document {doc_id!r}: {reason}")


class TagError(ArgmineError):
    """An IOB2 tag string is not part of the tag vocabulary."""


class OverlapError(ArgmineError):
    """Entity spans overlap where non-overlap is required."""


class PatternError(ArgmineError):
    """A boilerplate filter pattern failed to compile."""


class FixtureMissError(ArgmineError):
    """A (premise, hypothesis) pair is not recorded in the score fixture."""

    def __init__(self, premise: str, hypothesis: str):
        self.premise = premise
        self.hypothesis = hypothesis
        super().__init__(
            f"no recorded scores for pair ({premise[:40]!r}, {hypothesis[:40]!r})"
        )


class DuplicateKeyError(ArgmineError):
    """A score fixture records two different triples for the same pair."""


class BadScoresError(ArgmineError):
    """A score triple violates the probability invariants."""


class TransportError(ArgmineError):
    """The remote scorer could not be reached."""


class ScorerTimeoutError(TransportError):
    """The remote scorer did not answer within the configured timeout."""


class ProtocolError(ArgmineError):
    """The remote scorer answered outside the wire protocol."""


class ScoringFailedError(ArgmineError):
    """Every document in a classification run failed to score."""

    def __init__(self, failures: list[tuple[str, Exception]]):
        self.failures = failures
        heads = "; ".join(f"{doc}: {err}" for doc, err in failures[:3])
        super().__init__(f"scoring failed for all {len(failures)} documents ({heads})")


class EmptyInputError(ArgmineError):
    """An operation that needs at least one element received none."""


class LengthMismatchError(ArgmineError):
    """Two aligned sequences have different lengths."""


class PairMismatchError(ArgmineError):
    """Prediction and gold cover different pair sets."""
