"""Domain model for annotated clinical exam documents.

A document is one exam item: a clinical case, a question, a set of answer
options (exactly one correct) and an explanation. Tokens come pre-segmented
and carry character offsets into their section text. The IOB2 tag sequence
is aligned 1:1 with the tokens and decodes into typed entity spans; the
relation layer references those spans by their ordinal in decode order.

Everything here is immutable after construction. Parsing validates all
structural invariants once, and every later stage treats documents as
read-only values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from argmine.errors import InvariantError
from argmine.util import as_fraction

# Section kinds, as they appear on the wire.
CASE = "case"
QUESTION = "question"
OPTION = "option"
EXPLANATION = "explanation"
SECTION_KINDS = (CASE, QUESTION, OPTION, EXPLANATION)

# Entity kinds.
PREMISE = "premise"
CLAIM = "claim"
MAJOR_CLAIM = "major_claim"
ENTITY_KINDS = (PREMISE, CLAIM, MAJOR_CLAIM)

# Relation kinds.
SUPPORT = "support"
ATTACK = "attack"
RELATION_KINDS = (SUPPORT, ATTACK)


@dataclass(frozen=True, slots=True)
class Section:
    """One section of an exam document.

    ``option_id`` and ``correct`` are meaningful only when ``kind`` is
    ``option``; they are None otherwise.
    """

    kind: str
    text: str
    option_id: int | None = None
    correct: bool | None = None


@dataclass(frozen=True, slots=True)
class Token:
    """A pre-segmented token with offsets into its section's text."""

    text: str
    section: int  # index into Document.sections
    char_start: int
    char_end: int


@dataclass(frozen=True, slots=True)
class EntitySpan:
    """A maximal contiguous entity over document token indices (inclusive).

    ``ordinal`` is the span's position in decode order and is the identity
    used by the relation layer, datasets and predictions. ``section`` is the
    section index of the span's first token.
    """

    ordinal: int
    kind: str
    token_start: int
    token_end: int
    section: int


@dataclass(frozen=True, slots=True)
class RelationAnnotation:
    """A directed support/attack annotation between two entity ordinals."""

    src: int
    dst: int
    rel: str


@dataclass(frozen=True)
class Document:
    """One fully validated exam item.

    ``spans`` is the cached decode of ``tags`` (see
    :func:`argmine.corpus.iob2.decode_iob2`); relations reference entity
    ordinals in that list.
    """

    id: str
    sections: tuple[Section, ...]
    tokens: tuple[Token, ...]
    tags: tuple[str, ...]
    relations: tuple[RelationAnnotation, ...]
    spans: tuple[EntitySpan, ...] = field(default=(), compare=True)

    def section_kind(self, index: int) -> str:
        return self.sections[index].kind

    def span_tokens(self, span: EntitySpan) -> tuple[Token, ...]:
        return self.tokens[span.token_start : span.token_end + 1]

    def span_text(self, span: EntitySpan) -> str:
        """Surface text of a span.

        Uses character offsets into the section text when the span sits in a
        single section (the normal case); falls back to joining token texts
        with single spaces otherwise.
        """
        toks = self.span_tokens(span)
        secs = {t.section for t in toks}
        if len(secs) == 1:
            sec_text = self.sections[toks[0].section].text
            return sec_text[toks[0].char_start : toks[-1].char_end]
        return " ".join(t.text for t in toks)


def validate_document(doc: Document) -> None:
    """Check every Document invariant, raising InvariantError on the first hit.

    Assumes tags were already decoded into ``doc.spans`` (decode itself
    reports tag vocabulary problems as TagError).
    """
    if len(doc.tags) != len(doc.tokens):
        raise InvariantError(
            doc.id, f"{len(doc.tags)} tags for {len(doc.tokens)} tokens"
        )

    correct = [s for s in doc.sections if s.kind == OPTION and s.correct]
    if len(correct) != 1:
        raise InvariantError(
            doc.id, f"expected exactly one correct option, found {len(correct)}"
        )

    last_sec = -1
    per_section_end: dict[int, int] = {}
    for i, tok in enumerate(doc.tokens):
        if not 0 <= tok.section < len(doc.sections):
            raise InvariantError(doc.id, f"token {i} references section {tok.section}")
        if tok.section < last_sec:
            raise InvariantError(doc.id, f"token {i} breaks section order")
        last_sec = tok.section
        if not 0 <= tok.char_start < tok.char_end:
            raise InvariantError(doc.id, f"token {i} has empty or negative extent")
        if tok.char_end > len(doc.sections[tok.section].text):
            raise InvariantError(doc.id, f"token {i} exceeds its section text")
        prev_end = per_section_end.get(tok.section, -1)
        if tok.char_start < prev_end:
            raise InvariantError(doc.id, f"token {i} overlaps the previous token")
        per_section_end[tok.section] = tok.char_end

    n = len(doc.spans)
    seen: set[tuple[int, int, str]] = set()
    for rel in doc.relations:
        if not (0 <= rel.src < n and 0 <= rel.dst < n):
            raise InvariantError(
                doc.id, f"relation {rel.src}->{rel.dst} references a missing entity"
            )
        if rel.src == rel.dst:
            raise InvariantError(doc.id, f"relation {rel.src}->{rel.dst} is a self-loop")
        if rel.rel not in RELATION_KINDS:
            raise InvariantError(doc.id, f"unknown relation kind {rel.rel!r}")
        key = (rel.src, rel.dst, rel.rel)
        if key in seen:
            raise InvariantError(doc.id, f"duplicate relation {key}")
        seen.add(key)


@dataclass(frozen=True, slots=True)
class SplitSpec:
    """Train/dev/test fractions plus the seed that fixes the assignment.

    Fractions are exact rationals so the "sum to one" invariant is checked
    without float noise; floats given to :meth:`of` go through their decimal
    literal (``Fraction(str(x))``), so ``SplitSpec.of(0.7, 0.1, 0.2)`` means
    exactly 7/10, 1/10, 2/10.
    """

    train: Fraction
    dev: Fraction
    test: Fraction
    seed: int = 42

    def __post_init__(self) -> None:
        for name, frac in (("train", self.train), ("dev", self.dev), ("test", self.test)):
            if frac < 0:
                raise ValueError(f"{name} fraction is negative: {frac}")
        total = self.train + self.dev + self.test
        if total != 1:
            raise ValueError(f"fractions sum to {total}, expected exactly 1")

    @classmethod
    def of(cls, train: float | str | Fraction, dev: float | str | Fraction,
           test: float | str | Fraction, seed: int = 42) -> "SplitSpec":
        return cls(as_fraction(train), as_fraction(dev), as_fraction(test), seed)

