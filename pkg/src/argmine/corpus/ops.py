"""Corpus-level operations: splitting, section filtering, stats, boilerplate.

All operations are pure: they take validated documents and return new values,
never mutating their inputs.
"""

from __future__ import annotations

import json
import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from argmine.corpus.iob2 import decode_iob2, encode_iob2
from argmine.corpus.model import (
    ENTITY_KINDS,
    RELATION_KINDS,
    SECTION_KINDS,
    Document,
    EntitySpan,
    RelationAnnotation,
    SplitSpec,
    validate_document,
)
from argmine.errors import EmptyInputError, PatternError
from argmine.util import stable_shuffle

log = logging.getLogger(__name__)

# Entities that literally restate the answer key carry no argumentative
# content; they are dropped before graph construction.
DEFAULT_BOILERPLATE_PATTERNS = (
    r"^the correct answer is \d+\.?$",
    r"^answer \d+ is (in)?correct\.?$",
)


def split_corpus(
    documents: Sequence[Document], spec: SplitSpec
) -> tuple[list[Document], list[Document], list[Document]]:
    """Partition documents into (train, dev, test).

    Split sizes are floor(n * fraction) per part with every remainder
    document going to train. Assignment ranks document ids by a seeded
    shuffle (ids sorted lexicographically first), so the partition is a
    deterministic function of the id set and the seed. Each returned part
    preserves the input document order.
    """
    if not documents:
        raise EmptyInputError("cannot split an empty corpus")
    n = len(documents)
    n_dev = int(n * spec.dev)  # Fraction * int is exact; int() floors
    n_test = int(n * spec.test)
    n_train = n - n_dev - n_test

    ordered_ids = stable_shuffle(
        sorted(doc.id for doc in documents), spec.seed, key=lambda d: d, domain="split"
    )
    train_ids = set(ordered_ids[:n_train])
    dev_ids = set(ordered_ids[n_train : n_train + n_dev])

    train = [d for d in documents if d.id in train_ids]
    dev = [d for d in documents if d.id in dev_ids]
    test = [d for d in documents if d.id not in train_ids and d.id not in dev_ids]
    return train, dev, test


def section_filter(documents: Iterable[Document], keep: set[str]) -> list[Document]:
    """Restrict each document to tokens, tags and spans in the kept sections.

    The section list itself is preserved (it carries the answer-key
    metadata); only the token layer shrinks. Entities survive when all their
    tokens sit in kept sections, relations survive when both endpoints do,
    and entity ordinals are re-based to the filtered decode order.
    """
    if not keep:
        raise ValueError("keep set is empty")
    unknown = keep - set(SECTION_KINDS)
    if unknown:
        raise ValueError(f"unknown section kinds: {sorted(unknown)}")
    return [_filter_one(doc, keep) for doc in documents]


def _filter_one(doc: Document, keep: set[str]) -> Document:
    kept_token = [doc.sections[t.section].kind in keep for t in doc.tokens]
    new_index = {}
    new_tokens = []
    for i, tok in enumerate(doc.tokens):
        if kept_token[i]:
            new_index[i] = len(new_tokens)
            new_tokens.append(tok)

    surviving: list[EntitySpan] = []
    old_to_new: dict[int, int] = {}
    for span in doc.spans:
        if all(kept_token[t] for t in range(span.token_start, span.token_end + 1)):
            old_to_new[span.ordinal] = len(surviving)
            surviving.append(span)

    rebased = [
        EntitySpan(
            ordinal=i,
            kind=s.kind,
            token_start=new_index[s.token_start],
            token_end=new_index[s.token_end],
            section=s.section,
        )
        for i, s in enumerate(surviving)
    ]
    new_tags = encode_iob2(rebased, len(new_tokens))

    new_relations = [
        RelationAnnotation(src=old_to_new[r.src], dst=old_to_new[r.dst], rel=r.rel)
        for r in doc.relations
        if r.src in old_to_new and r.dst in old_to_new
    ]

    filtered = Document(
        id=doc.id,
        sections=doc.sections,
        tokens=tuple(new_tokens),
        tags=tuple(new_tags),
        relations=tuple(new_relations),
        spans=tuple(decode_iob2(new_tags, new_tokens, doc.sections)),
    )
    validate_document(filtered)
    return filtered


@dataclass(frozen=True)
class StatsReport:
    """Entity and relation counts for a corpus, with per-section breakdowns."""

    documents: int
    entities: dict[str, int]
    relations: dict[str, int]
    per_section: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "documents": self.documents,
            "entities": {k: self.entities[k] for k in ENTITY_KINDS},
            "relations": {k: self.relations[k] for k in RELATION_KINDS},
            "per_section": {
                sec: {k: self.per_section[sec][k] for k in ENTITY_KINDS}
                for sec in SECTION_KINDS
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        """Aligned-column rendering for terminals."""
        rows = [("section", *ENTITY_KINDS)]
        for sec in SECTION_KINDS:
            rows.append((sec, *(str(self.per_section[sec][k]) for k in ENTITY_KINDS)))
        rows.append(("total", *(str(self.entities[k]) for k in ENTITY_KINDS)))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = [f"documents: {self.documents}"]
        for row in rows:
            lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        lines.append(
            "relations: " + "  ".join(f"{k}={self.relations[k]}" for k in RELATION_KINDS)
        )
        return "\n".join(lines)


def corpus_stats(documents: Sequence[Document]) -> StatsReport:
    """Count documents, entities by kind and relations by kind.

    Per-section totals always sum to the overall entity totals: each span is
    attributed to the section of its first token.
    """
    entities = {kind: 0 for kind in ENTITY_KINDS}
    relations = {kind: 0 for kind in RELATION_KINDS}
    per_section = {sec: {kind: 0 for kind in ENTITY_KINDS} for sec in SECTION_KINDS}
    for doc in documents:
        for span in doc.spans:
            entities[span.kind] += 1
            per_section[doc.sections[span.section].kind][span.kind] += 1
        for rel in doc.relations:
            relations[rel.rel] += 1
    return StatsReport(
        documents=len(documents),
        entities=entities,
        relations=relations,
        per_section=per_section,
    )


def compile_patterns(patterns: Iterable[str]) -> list[re.Pattern[str]]:
    compiled = []
    for pattern in patterns:
        try:
            compiled.append(re.compile(pattern, re.IGNORECASE))
        except re.error as exc:
            raise PatternError(f"invalid pattern {pattern!r}: {exc}") from exc
    return compiled


def filter_boilerplate(
    doc: Document,
    patterns: Iterable[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> list[EntitySpan]:
    """Drop spans whose surface text matches any of the (anchored) patterns.

    Returns the surviving spans with their original ordinals; relations are
    handled downstream by graph construction, which drops edges touching a
    removed span.
    """
    compiled = compile_patterns(patterns)
    kept = []
    for span in doc.spans:
        text = doc.span_text(span)
        if any(p.search(text) for p in compiled):
            log.debug("boilerplate span dropped: %s %r", doc.id, text)
            continue
        kept.append(span)
    return kept
