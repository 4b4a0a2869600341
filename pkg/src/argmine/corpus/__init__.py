from argmine.corpus.iob2 import (
    OUTSIDE,
    TAG_VOCABULARY,
    decode_iob2,
    decode_untyped_sections,
    encode_iob2,
)
from argmine.corpus.io import (
    document_to_record,
    parse_corpus,
    parse_document_record,
    read_relations_tsv,
    write_corpus,
    write_relations_tsv,
)
from argmine.corpus.model import (
    ATTACK,
    CASE,
    CLAIM,
    ENTITY_KINDS,
    EXPLANATION,
    MAJOR_CLAIM,
    OPTION,
    PREMISE,
    QUESTION,
    RELATION_KINDS,
    SECTION_KINDS,
    SUPPORT,
    Document,
    EntitySpan,
    RelationAnnotation,
    Section,
    SplitSpec,
    Token,
    validate_document,
)
from argmine.corpus.ops import (
    DEFAULT_BOILERPLATE_PATTERNS,
    StatsReport,
    corpus_stats,
    filter_boilerplate,
    section_filter,
    split_corpus,
)

__all__ = [
    "ATTACK",
    "CASE",
    "CLAIM",
    "DEFAULT_BOILERPLATE_PATTERNS",
    "ENTITY_KINDS",
    "EXPLANATION",
    "MAJOR_CLAIM",
    "OPTION",
    "OUTSIDE",
    "PREMISE",
    "QUESTION",
    "RELATION_KINDS",
    "SECTION_KINDS",
    "SUPPORT",
    "TAG_VOCABULARY",
    "Document",
    "EntitySpan",
    "RelationAnnotation",
    "Section",
    "SplitSpec",
    "StatsReport",
    "Token",
    "corpus_stats",
    "decode_iob2",
    "decode_untyped_sections",
    "document_to_record",
    "encode_iob2",
    "filter_boilerplate",
    "parse_corpus",
    "parse_document_record",
    "read_relations_tsv",
    "section_filter",
    "split_corpus",
    "validate_document",
    "write_corpus",
    "write_relations_tsv",
]
