"""Corpus ingestion and serialization.

Canonical ingestion format is JSONL, one document per line:

    {"id": str,
     "sections": [{"kind": "case"|"question"|"option"|"explanation",
                   "option_id": int?, "correct": bool?, "text": str}],
     "tokens": [{"t": str, "sec": int, "cs": int, "ce": int}],
     "tags": [str],
     "relations": [{"src": int, "dst": int, "rel": "support"|"attack"}]}

``src``/``dst`` are entity ordinals in decode order. Files are UTF-8 with LF
line endings. A TSV alternative carries the relation layer alone:
``doc_id<TAB>src<TAB>support|attack<TAB>dst``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from argmine.corpus.iob2 import decode_iob2
from argmine.corpus.model import (
    OPTION,
    RELATION_KINDS,
    SECTION_KINDS,
    Document,
    RelationAnnotation,
    Section,
    Token,
    validate_document,
)
from argmine.errors import SchemaError


def _expect(record: dict, key: str, types: tuple[type, ...], line: int | None) -> Any:
    if key not in record:
        raise SchemaError("missing field", line=line, field=key)
    value = record[key]
    if not isinstance(value, types) or isinstance(value, bool) and bool not in types:
        raise SchemaError(
            f"expected {'/'.join(t.__name__ for t in types)}, got {type(value).__name__}",
            line=line,
            field=key,
        )
    return value


def parse_document_record(record: dict, line: int | None = None) -> Document:
    """Build and validate one Document from a decoded JSON record."""
    if not isinstance(record, dict):
        raise SchemaError("document record is not an object", line=line)
    doc_id = _expect(record, "id", (str,), line)

    sections: list[Section] = []
    for entry in _expect(record, "sections", (list,), line):
        if not isinstance(entry, dict):
            raise SchemaError("section is not an object", line=line, field="sections")
        kind = _expect(entry, "kind", (str,), line)
        if kind not in SECTION_KINDS:
            raise SchemaError(f"unknown section kind {kind!r}", line=line, field="kind")
        text = _expect(entry, "text", (str,), line)
        option_id = entry.get("option_id")
        correct = entry.get("correct")
        if kind == OPTION:
            if not isinstance(option_id, int) or isinstance(option_id, bool):
                raise SchemaError("option section needs an integer option_id",
                                  line=line, field="option_id")
            correct = bool(correct)
        else:
            option_id = None
            correct = None
        sections.append(Section(kind=kind, text=text, option_id=option_id, correct=correct))

    tokens: list[Token] = []
    for entry in _expect(record, "tokens", (list,), line):
        if not isinstance(entry, dict):
            raise SchemaError("token is not an object", line=line, field="tokens")
        tokens.append(
            Token(
                text=_expect(entry, "t", (str,), line),
                section=_expect(entry, "sec", (int,), line),
                char_start=_expect(entry, "cs", (int,), line),
                char_end=_expect(entry, "ce", (int,), line),
            )
        )

    tags = []
    for tag in _expect(record, "tags", (list,), line):
        if not isinstance(tag, str):
            raise SchemaError("tag is not a string", line=line, field="tags")
        tags.append(tag)

    relations = []
    for entry in _expect(record, "relations", (list,), line):
        if not isinstance(entry, dict):
            raise SchemaError("relation is not an object", line=line, field="relations")
        rel = _expect(entry, "rel", (str,), line)
        if rel not in RELATION_KINDS:
            raise SchemaError(f"unknown relation kind {rel!r}", line=line, field="rel")
        relations.append(
            RelationAnnotation(
                src=_expect(entry, "src", (int,), line),
                dst=_expect(entry, "dst", (int,), line),
                rel=rel,
            )
        )

    if len(tags) != len(tokens):
        # Report as the document invariant rather than a schema problem so the
        # error names the document.
        from argmine.errors import InvariantError

        raise InvariantError(doc_id, f"{len(tags)} tags for {len(tokens)} tokens")

    spans = tuple(decode_iob2(tags, tokens, sections))
    doc = Document(
        id=doc_id,
        sections=tuple(sections),
        tokens=tuple(tokens),
        tags=tuple(tags),
        relations=tuple(relations),
        spans=spans,
    )
    validate_document(doc)
    return doc


def parse_corpus(path: str | Path) -> list[Document]:
    """Parse a corpus JSONL file into validated documents."""
    documents: list[Document] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            documents.append(parse_document_record(record, line=line_no))
    return documents


def document_to_record(doc: Document) -> dict:
    """Serialize a Document back into its JSONL record form (stable field order)."""
    sections = []
    for sec in doc.sections:
        entry: dict[str, Any] = {"kind": sec.kind}
        if sec.kind == OPTION:
            entry["option_id"] = sec.option_id
            entry["correct"] = bool(sec.correct)
        entry["text"] = sec.text
        sections.append(entry)
    return {
        "id": doc.id,
        "sections": sections,
        "tokens": [
            {"t": t.text, "sec": t.section, "cs": t.char_start, "ce": t.char_end}
            for t in doc.tokens
        ],
        "tags": list(doc.tags),
        "relations": [
            {"src": r.src, "dst": r.dst, "rel": r.rel} for r in doc.relations
        ],
    }


def write_corpus(documents: list[Document], path: str | Path) -> None:
    """Write documents as JSONL (UTF-8, LF, stable field order)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc in documents:
            handle.write(json.dumps(document_to_record(doc), ensure_ascii=False))
            handle.write("\n")


def write_relations_tsv(documents: list[Document], path: str | Path) -> None:
    """Export the relation layer as doc_id<TAB>src<TAB>rel<TAB>dst lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc in documents:
            for rel in doc.relations:
                handle.write(f"{doc.id}\t{rel.src}\t{rel.rel}\t{rel.dst}\n")


def read_relations_tsv(path: str | Path) -> dict[str, list[RelationAnnotation]]:
    """Read a relation TSV into a doc_id -> relations mapping."""
    relations: dict[str, list[RelationAnnotation]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise SchemaError("expected 4 tab-separated columns", line=line_no)
            doc_id, src, rel, dst = parts
            if rel not in RELATION_KINDS:
                raise SchemaError(f"unknown relation kind {rel!r}", line=line_no, field="rel")
            try:
                entry = RelationAnnotation(src=int(src), dst=int(dst), rel=rel)
            except ValueError as exc:
                raise SchemaError("non-integer entity ordinal", line=line_no) from exc
            relations.setdefault(doc_id, []).append(entry)
    return relations
