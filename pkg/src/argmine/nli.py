"""NLI dataset generation from annotated documents.

Annotated entity-to-MajorClaim relations become entailment examples (the
relation verbalized with the first verb of its list) plus contradiction
examples (first verb of the opposite list). Neutral examples come from the
strategy-selected unannotated pairs, verbalized both ways. Balancing and
document-level subsampling are seeded and deterministic.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from argmine.corpus.model import (
    ATTACK,
    CASE,
    EXPLANATION,
    MAJOR_CLAIM,
    QUESTION,
    RELATION_KINDS,
    SUPPORT,
    Document,
)
from argmine.corpus.ops import DEFAULT_BOILERPLATE_PATTERNS, filter_boilerplate
from argmine.errors import SchemaError
from argmine.graph import STRATEGIES, build_graph, neutral_pairs
from argmine.util import as_fraction, stable_sample, stable_shuffle

log = logging.getLogger(__name__)

ENTAILMENT = "entailment"
NEUTRAL = "neutral"
CONTRADICTION = "contradiction"
NLI_LABELS = (ENTAILMENT, NEUTRAL, CONTRADICTION)

_PREMISE_SECTIONS = (CASE, QUESTION, EXPLANATION)
_OPPOSITE = {SUPPORT: ATTACK, ATTACK: SUPPORT}


@dataclass(frozen=True, slots=True)
class VerbalizationSet:
    """Ordered verb lists for each relation kind; order fixes tie-breaking."""

    attack_verbs: tuple[str, ...]
    support_verbs: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.attack_verbs or not self.support_verbs:
            raise ValueError("verbalization lists must be non-empty")
        combined = self.attack_verbs + self.support_verbs
        if len(set(combined)) != len(combined):
            raise ValueError("verbalization lists must be disjoint and duplicate-free")

    def verbs_for(self, rel: str) -> tuple[str, ...]:
        if rel == ATTACK:
            return self.attack_verbs
        if rel == SUPPORT:
            return self.support_verbs
        raise ValueError(f"unknown relation kind {rel!r}")

    def all_verbs(self) -> tuple[str, ...]:
        """Attack list first, then support list; positions break ties."""
        return self.attack_verbs + self.support_verbs

    def kind_of(self, verb: str) -> str:
        if verb in self.attack_verbs:
            return ATTACK
        if verb in self.support_verbs:
            return SUPPORT
        raise ValueError(f"verb {verb!r} not in this verbalization set")


DEFAULT_VERBALIZATIONS = VerbalizationSet(
    attack_verbs=("attack", "challenge", "contradict", "dispute", "refute"),
    support_verbs=("support", "confirm", "corroborate", "endorse", "validate"),
)


@dataclass(frozen=True, slots=True)
class NLIExample:
    premise: str
    hypothesis: str
    label: str
    doc_id: str
    x: int
    y: int
    rel: str
    verb: str
    strategy: str | None = None


@dataclass(frozen=True, slots=True)
class DatasetConfig:
    strategy: str
    seed: int = 42
    verbalizations: VerbalizationSet = DEFAULT_VERBALIZATIONS
    fraction: Fraction = Fraction(1)
    balance: bool = False

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not 0 < self.fraction <= 1:
            raise ValueError(f"fraction must be in (0, 1], got {self.fraction}")



def build_premise_text(doc: Document) -> str:
    """Case, question and explanation texts joined by newlines, options removed.

    Empty sections are skipped so they never contribute separator noise.
    """
    parts = [
        s.text
        for s in doc.sections
        if s.kind in _PREMISE_SECTIONS and s.text
    ]
    if not parts:
        log.warning("premise text is empty (options-only document): %s", doc.id)
        return ""
    return "\n".join(parts)


def render_hypothesis(x_text: str, verb: str, y_text: str) -> str:
    return f"{x_text} {verb} {y_text}"


def generate_examples(
    documents: Iterable[Document],
    config: DatasetConfig,
    patterns: Sequence[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> list[NLIExample]:
    """Generate NLI examples for every document, in doc-id order.

    Boilerplate entities are filtered before graph construction. Documents
    without a MajorClaim are skipped with a warning: they can anchor neither
    annotated nor neutral hypotheses.
    """
    verbs = config.verbalizations
    examples: list[NLIExample] = []
    for doc in sorted(documents, key=lambda d: d.id):
        graph = build_graph(doc, filter_boilerplate(doc, patterns))
        if not graph.major_claims():
            log.warning("document has no MajorClaim, skipped: %s", doc.id)
            continue
        premise = build_premise_text(doc)
        text = {s.ordinal: doc.span_text(s) for s in graph.nodes}

        for edge in graph.edges:
            if graph.span(edge.dst).kind != MAJOR_CLAIM:
                continue
            verb = verbs.verbs_for(edge.rel)[0]
            opposite = _OPPOSITE[edge.rel]
            counter_verb = verbs.verbs_for(opposite)[0]
            examples.append(
                NLIExample(
                    premise=premise,
                    hypothesis=render_hypothesis(text[edge.src], verb, text[edge.dst]),
                    label=ENTAILMENT,
                    doc_id=doc.id,
                    x=edge.src,
                    y=edge.dst,
                    rel=edge.rel,
                    verb=verb,
                )
            )
            examples.append(
                NLIExample(
                    premise=premise,
                    hypothesis=render_hypothesis(
                        text[edge.src], counter_verb, text[edge.dst]
                    ),
                    label=CONTRADICTION,
                    doc_id=doc.id,
                    x=edge.src,
                    y=edge.dst,
                    rel=opposite,
                    verb=counter_verb,
                )
            )

        for x, y in neutral_pairs(graph, config.strategy):
            for rel in (SUPPORT, ATTACK):
                verb = verbs.verbs_for(rel)[0]
                examples.append(
                    NLIExample(
                        premise=premise,
                        hypothesis=render_hypothesis(text[x], verb, text[y]),
                        label=NEUTRAL,
                        doc_id=doc.id,
                        x=x,
                        y=y,
                        rel=rel,
                        verb=verb,
                        strategy=config.strategy,
                    )
                )
    return examples


def _example_key(example: NLIExample) -> tuple:
    return (example.doc_id, example.x, example.y, example.verb)


def balance_neutrals(examples: Sequence[NLIExample], seed: int) -> list[NLIExample]:
    """Reduce neutral count to match the entailment count.

    A single per-document cap k (the smallest one whose capped sum reaches
    the target) keeps the neutral distribution uniform across documents;
    any excess after capping is trimmed by a global seeded selection. When
    neutrals are too few to reach the target, everything is kept and a
    shortfall is logged. Surviving examples keep their original order.
    """
    target = sum(1 for e in examples if e.label == ENTAILMENT)
    neutrals = [e for e in examples if e.label == NEUTRAL]

    per_doc: dict[str, list[NLIExample]] = {}
    for e in neutrals:
        per_doc.setdefault(e.doc_id, []).append(e)

    if len(neutrals) < target:
        log.warning(
            "neutral shortfall: %d neutrals available for target %d, keeping all",
            len(neutrals),
            target,
        )
        return list(examples)

    cap = 0
    while sum(min(cap, len(group)) for group in per_doc.values()) < target:
        cap += 1

    kept: list[NLIExample] = []
    for doc_id in sorted(per_doc):
        kept.extend(stable_sample(per_doc[doc_id], cap, seed, _example_key, "balance-doc"))
    if len(kept) > target:
        kept = stable_sample(kept, target, seed, _example_key, "balance-trim")

    keep_set = {_example_key(e) for e in kept}
    return [
        e
        for e in examples
        if e.label != NEUTRAL or _example_key(e) in keep_set
    ]


def subsample_training(
    examples: Sequence[NLIExample],
    fraction: float | Fraction | str,
    seed: int,
) -> list[NLIExample]:
    """Keep the examples of the first ceil(fraction * n_docs) documents under
    a seeded document ranking. Rankings depend only on (seed, doc id), so
    smaller fractions are always subsets of larger ones at the same seed."""
    frac = as_fraction(fraction)
    if not 0 < frac <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    doc_ids = sorted({e.doc_id for e in examples})
    if not doc_ids:
        return []
    n_keep = math.ceil(frac * len(doc_ids))
    ranked = stable_shuffle(doc_ids, seed, key=lambda d: d, domain="subsample")
    kept_docs = set(ranked[:n_keep])
    return [e for e in examples if e.doc_id in kept_docs]


def build_dataset(
    documents: Iterable[Document],
    config: DatasetConfig,
    patterns: Sequence[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> list[NLIExample]:
    """generate -> subsample -> balance, per the training-data pipeline."""
    examples = generate_examples(documents, config, patterns)
    if config.fraction != 1:
        examples = subsample_training(examples, config.fraction, config.seed)
    if config.balance:
        examples = balance_neutrals(examples, config.seed)
    return examples


def example_to_record(example: NLIExample) -> dict:
    return {
        "premise": example.premise,
        "hypothesis": example.hypothesis,
        "label": example.label,
        "doc": example.doc_id,
        "x": example.x,
        "y": example.y,
        "rel": example.rel,
        "verb": example.verb,
        "strategy": example.strategy,
    }


def example_from_record(record: dict, line: int | None = None) -> NLIExample:
    if not isinstance(record, dict):
        raise SchemaError("example record must be an object", line=line)
    for key in ("premise", "hypothesis", "label", "doc", "rel", "verb"):
        if not isinstance(record.get(key), str):
            raise SchemaError(f"missing or non-string field {key!r}", line=line, field=key)
    for key in ("x", "y"):
        if not isinstance(record.get(key), int) or isinstance(record.get(key), bool):
            raise SchemaError(f"field {key!r} must be an integer", line=line, field=key)
    if record["label"] not in NLI_LABELS:
        raise SchemaError(f"unknown label {record['label']!r}", line=line, field="label")
    if record["rel"] not in RELATION_KINDS:
        raise SchemaError(f"unknown rel {record['rel']!r}", line=line, field="rel")
    strategy = record.get("strategy")
    if strategy is not None and strategy not in STRATEGIES:
        raise SchemaError(f"unknown strategy {strategy!r}", line=line, field="strategy")
    return NLIExample(
        premise=record["premise"],
        hypothesis=record["hypothesis"],
        label=record["label"],
        doc_id=record["doc"],
        x=record["x"],
        y=record["y"],
        rel=record["rel"],
        verb=record["verb"],
        strategy=strategy,
    )


def write_dataset(examples: Iterable[NLIExample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for example in examples:
            handle.write(json.dumps(example_to_record(example), ensure_ascii=False))
            handle.write("\n")


def read_dataset(path: str | Path) -> list[NLIExample]:
    examples = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}", line=line_no) from exc
            examples.append(example_from_record(record, line=line_no))
    return examples
