"""IOB2 tag sequence decoding and encoding.

The tag vocabulary is O, B-PREMISE, I-PREMISE, B-CLAIM, I-CLAIM. Decoding
turns maximal ``B-X (I-X)*`` runs into typed spans; an ``I-X`` that does not
continue a run of the same type (after O, at sequence start, or after a
different type) is repaired to ``B-X`` rather than rejected, matching common
sequence-evaluation practice. Claim spans that lie wholly inside answer
option sections are upgraded to major claims; premise tags inside options
keep their tagged type.

``encode_iob2`` is the inverse used by round-trip tests: major claims encode
as CLAIM tags and the kind is re-derived from section placement on decode.
"""

from __future__ import annotations

from collections.abc import Sequence

from argmine.corpus.model import (
    CLAIM,
    MAJOR_CLAIM,
    OPTION,
    PREMISE,
    EntitySpan,
    Section,
    Token,
)
from argmine.errors import OverlapError, TagError

OUTSIDE = "O"
_TYPE_BY_SUFFIX = {"PREMISE": PREMISE, "CLAIM": CLAIM}
_SUFFIX_BY_TYPE = {PREMISE: "PREMISE", CLAIM: "CLAIM", MAJOR_CLAIM: "CLAIM"}
TAG_VOCABULARY = (OUTSIDE, "B-PREMISE", "I-PREMISE", "B-CLAIM", "I-CLAIM")


def _split_tag(tag: str, position: int) -> tuple[str, str] | None:
    """Return (prefix, entity type) for a non-O tag, None for O."""
    if tag == OUTSIDE:
        return None
    if "-" in tag:
        prefix, suffix = tag.split("-", 1)
        if prefix in ("B", "I") and suffix in _TYPE_BY_SUFFIX:
            return prefix, _TYPE_BY_SUFFIX[suffix]
    raise TagError(f"unknown IOB2 tag {tag!r} at position {position}")


def decode_iob2(
    tags: Sequence[str],
    tokens: Sequence[Token],
    sections: Sequence[Section],
) -> list[EntitySpan]:
    """Decode an IOB2 tag sequence into entity spans, sorted by token_start.

    ``tokens`` and ``sections`` supply the section placement used to derive
    major claims. Raises TagError on unknown tag strings and ValueError when
    tags and tokens disagree in length.
    """
    if len(tags) != len(tokens):
        raise ValueError(f"{len(tags)} tags for {len(tokens)} tokens")

    runs: list[tuple[str, int, int]] = []  # (type, start, end inclusive)
    current: tuple[str, int] | None = None  # (type, start)

    for i, tag in enumerate(tags):
        parsed = _split_tag(tag, i)
        if parsed is None:
            if current is not None:
                runs.append((current[0], current[1], i - 1))
                current = None
            continue
        prefix, etype = parsed
        continues = prefix == "I" and current is not None and current[0] == etype
        if continues:
            continue
        # B-X, or a repaired I-X that starts a fresh run.
        if current is not None:
            runs.append((current[0], current[1], i - 1))
        current = (etype, i)
    if current is not None:
        runs.append((current[0], current[1], len(tags) - 1))

    spans: list[EntitySpan] = []
    for ordinal, (etype, start, end) in enumerate(runs):
        kind = etype
        if etype == CLAIM and all(
            sections[tokens[t].section].kind == OPTION for t in range(start, end + 1)
        ):
            kind = MAJOR_CLAIM
        spans.append(
            EntitySpan(
                ordinal=ordinal,
                kind=kind,
                token_start=start,
                token_end=end,
                section=tokens[start].section,
            )
        )
    return spans


def encode_iob2(spans: Sequence[EntitySpan], n_tokens: int) -> list[str]:
    """Encode spans back into an IOB2 tag sequence of length ``n_tokens``.

    Spans must be non-overlapping and inside [0, n_tokens); major claims
    encode as CLAIM tags.
    """
    tags = [OUTSIDE] * n_tokens
    occupied = [False] * n_tokens
    for span in spans:
        if not 0 <= span.token_start <= span.token_end < n_tokens:
            raise ValueError(
                f"span {span.token_start}..{span.token_end} outside 0..{n_tokens - 1}"
            )
        if any(occupied[span.token_start : span.token_end + 1]):
            raise OverlapError(
                f"span {span.token_start}..{span.token_end} overlaps another span"
            )
        suffix = _SUFFIX_BY_TYPE[span.kind]
        tags[span.token_start] = f"B-{suffix}"
        for t in range(span.token_start + 1, span.token_end + 1):
            tags[t] = f"I-{suffix}"
        for t in range(span.token_start, span.token_end + 1):
            occupied[t] = True
    return tags


def decode_untyped_sections(tags: Sequence[str]) -> list[tuple[str, int, int]]:
    """Decode tags into (type, start, end) triples without section context.

    Same run construction and repair policy as :func:`decode_iob2`, used by
    evaluation where major claims are scored as claims and sections are
    irrelevant.
    """
    runs: list[tuple[str, int, int]] = []
    current: tuple[str, int] | None = None
    for i, tag in enumerate(tags):
        parsed = _split_tag(tag, i)
        if parsed is None:
            if current is not None:
                runs.append((current[0], current[1], i - 1))
                current = None
            continue
        prefix, etype = parsed
        if prefix == "I" and current is not None and current[0] == etype:
            continue
        if current is not None:
            runs.append((current[0], current[1], i - 1))
        current = (etype, i)
    if current is not None:
        runs.append((current[0], current[1], len(tags) - 1))
    return runs
