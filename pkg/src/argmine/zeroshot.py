"""Zero-shot relation classification through verbalized entailment.

Each candidate pair expands into one hypothesis per verb (attack list
first), the scorer rates them against the document premise, and the verb
with the highest entailment probability decides the relation. Pairs whose
best score misses the threshold get no-relation.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from argmine.corpus.model import ATTACK, SUPPORT, Document
from argmine.corpus.ops import DEFAULT_BOILERPLATE_PATTERNS, filter_boilerplate
from argmine.errors import (
    BadScoresError,
    EmptyInputError,
    FixtureMissError,
    LengthMismatchError,
    ProtocolError,
    SchemaError,
    ScoringFailedError,
    TransportError,
)
from argmine.graph import all_pairs, build_graph, candidate_pairs, gold_label
from argmine.metrics import relation_prf
from argmine.nli import VerbalizationSet, build_premise_text, render_hypothesis
from argmine.scoring import Scorer

log = logging.getLogger(__name__)

NO_RELATION = "no-relation"
PREDICTION_LABELS = (SUPPORT, ATTACK, NO_RELATION)

# Failures that should sink one document, not the whole run.
SCORER_ERRORS = (FixtureMissError, TransportError, ProtocolError, BadScoresError)


@dataclass(frozen=True, slots=True)
class RelationPrediction:
    doc_id: str
    x: int
    y: int
    label: str
    verb: str | None
    p: float

    @property
    def pair(self) -> tuple[str, int, int]:
        return (self.doc_id, self.x, self.y)


@dataclass(frozen=True, slots=True)
class ThresholdSearchResult:
    best_threshold: float
    best_mean_f1: float
    curve: tuple[tuple[float, float], ...]


def _passes(p: float, threshold: float, strict_gt: bool) -> bool:
    return p > threshold if strict_gt else p >= threshold


def classify_pair(
    premise: str,
    x_text: str,
    y_text: str,
    verbs: VerbalizationSet,
    scorer: Scorer,
    threshold: float,
    *,
    doc_id: str = "",
    x: int = 0,
    y: int = 0,
    strict_gt: bool = False,
) -> RelationPrediction:
    """Score every verbalization in one batch and keep the best entailment.

    Ties go to the earliest verb in (attack list ++ support list). The gate
    is >= by default; strict_gt switches to >.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    all_verbs = verbs.all_verbs()
    hypotheses = [render_hypothesis(x_text, verb, y_text) for verb in all_verbs]
    scores = scorer.score_batch(premise, hypotheses)
    best_index = max(range(len(all_verbs)), key=lambda i: (scores[i].entailment, -i))
    p = scores[best_index].entailment
    if _passes(p, threshold, strict_gt):
        verb = all_verbs[best_index]
        label = verbs.kind_of(verb)
    else:
        verb = None
        label = NO_RELATION
    return RelationPrediction(doc_id=doc_id, x=x, y=y, label=label, verb=verb, p=p)


def classify_corpus(
    documents: Iterable[Document],
    verbs: VerbalizationSet,
    scorer: Scorer,
    threshold: float,
    *,
    pairs: str = "candidates",
    strict_gt: bool = False,
    patterns: Sequence[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> list[RelationPrediction]:
    """Classify entity-to-MajorClaim pairs across a corpus, in doc-id order.

    pairs="candidates" scores only unannotated pairs (the production use:
    proposing new relations); pairs="all" also scores annotated pairs,
    which evaluation and threshold tuning need for their gold positives.
    Scorer failures are contained per document; the run only fails when
    every document with pairs failed.
    """
    if pairs not in ("candidates", "all"):
        raise ValueError(f"pairs must be 'candidates' or 'all', got {pairs!r}")
    select = candidate_pairs if pairs == "candidates" else all_pairs
    predictions: list[RelationPrediction] = []
    failures: list[tuple[str, Exception]] = []
    attempted = 0
    for doc in sorted(documents, key=lambda d: d.id):
        graph = build_graph(doc, filter_boilerplate(doc, patterns))
        pair_list = select(graph)
        if not pair_list:
            continue
        attempted += 1
        premise = build_premise_text(doc)
        text = {s.ordinal: doc.span_text(s) for s in graph.nodes}
        doc_predictions = []
        try:
            for x, y in pair_list:
                doc_predictions.append(
                    classify_pair(
                        premise,
                        text[x],
                        text[y],
                        verbs,
                        scorer,
                        threshold,
                        doc_id=doc.id,
                        x=x,
                        y=y,
                        strict_gt=strict_gt,
                    )
                )
        except SCORER_ERRORS as exc:
            log.warning("scoring failed for document %s: %s", doc.id, exc)
            failures.append((doc.id, exc))
            continue
        predictions.extend(doc_predictions)
    if attempted and len(failures) == attempted:
        raise ScoringFailedError(failures)
    return predictions


def gold_labels_for(
    documents: Iterable[Document],
    prediction_pairs: Iterable[tuple[str, int, int]],
    patterns: Sequence[str] = DEFAULT_BOILERPLATE_PATTERNS,
) -> dict[tuple[str, int, int], str]:
    """Annotated relation (or no-relation) for each predicted pair."""
    graphs = {
        doc.id: build_graph(doc, filter_boilerplate(doc, patterns)) for doc in documents
    }
    golds = {}
    for doc_id, x, y in prediction_pairs:
        if doc_id not in graphs:
            raise SchemaError(f"prediction references unknown document {doc_id!r}")
        graph = graphs[doc_id]
        if not (graph.has_node(x) and graph.has_node(y)):
            raise SchemaError(f"prediction references unknown entity in {doc_id!r}")
        golds[(doc_id, x, y)] = gold_label(graph, x, y) or NO_RELATION
    return golds


def tune_threshold(
    entries: Sequence[tuple[RelationPrediction, str]],
    *,
    strict_gt: bool = False,
) -> ThresholdSearchResult:
    """Sweep candidate thresholds and keep the smallest argmax of mean F1.

    Entries must be ungated predictions (threshold 0, >= gate): each one
    carries the would-be label and its max entailment probability. The
    candidate set {0.0} plus every observed probability contains an optimum,
    because predictions only change when the gate crosses an observed value.
    """
    if not entries:
        raise EmptyInputError("no predictions to tune on")
    for prediction, gold in entries:
        if prediction.label == NO_RELATION:
            raise ValueError(
                "tune_threshold needs ungated predictions; got a no-relation entry"
            )
        if gold not in PREDICTION_LABELS:
            raise ValueError(f"unknown gold label {gold!r}")
    golds = {i: gold for i, (_, gold) in enumerate(entries)}
    candidates = sorted({0.0} | {prediction.p for prediction, _ in entries})
    curve = []
    best_threshold = 0.0
    best_mean_f1 = -1.0
    for threshold in candidates:
        labels = {
            i: prediction.label
            if _passes(prediction.p, threshold, strict_gt)
            else NO_RELATION
            for i, (prediction, _) in enumerate(entries)
        }
        mean_f1 = relation_prf(labels, golds).mean_f1
        curve.append((threshold, mean_f1))
        if mean_f1 > best_mean_f1:
            best_threshold = threshold
            best_mean_f1 = mean_f1
    return ThresholdSearchResult(
        best_threshold=best_threshold,
        best_mean_f1=best_mean_f1,
        curve=tuple(curve),
    )


@dataclass(frozen=True)
class UsageMatrix:
    """Counts of (chosen verbalization, gold label); gated predictions land
    in the no-relation row."""

    rows: tuple[str, ...]
    columns: tuple[str, ...]
    counts: dict[tuple[str, str], int]

    def cell(self, row: str, column: str) -> int:
        return self.counts.get((row, column), 0)

    def to_json_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "rows": {row: [self.cell(row, c) for c in self.columns] for row in self.rows},
        }

    def to_text(self) -> str:
        table = [("verb", *self.columns)]
        for row in self.rows:
            table.append((row, *(str(self.cell(row, c)) for c in self.columns)))
        widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
        return "\n".join(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in table
        )


def verbalization_usage(
    predictions: Sequence[RelationPrediction],
    golds: Sequence[str],
    verbs: VerbalizationSet,
) -> UsageMatrix:
    if len(predictions) != len(golds):
        raise LengthMismatchError(
            f"{len(predictions)} predictions vs {len(golds)} golds"
        )
    rows = verbs.all_verbs() + (NO_RELATION,)
    counts: dict[tuple[str, str], int] = {}
    for prediction, gold in zip(predictions, golds):
        if gold not in PREDICTION_LABELS:
            raise ValueError(f"unknown gold label {gold!r}")
        row = prediction.verb if prediction.label != NO_RELATION else NO_RELATION
        counts[(row, gold)] = counts.get((row, gold), 0) + 1
    return UsageMatrix(rows=rows, columns=PREDICTION_LABELS, counts=counts)


def prediction_to_record(prediction: RelationPrediction) -> dict:
    return {
        "doc": prediction.doc_id,
        "x": prediction.x,
        "y": prediction.y,
        "label": prediction.label,
        "verb": prediction.verb,
        "p": prediction.p,
    }


def prediction_from_record(record: dict, line: int | None = None) -> RelationPrediction:
    if not isinstance(record, dict):
        raise SchemaError("prediction record must be an object", line=line)
    if not isinstance(record.get("doc"), str):
        raise SchemaError("missing or non-string field 'doc'", line=line, field="doc")
    for key in ("x", "y"):
        if not isinstance(record.get(key), int) or isinstance(record.get(key), bool):
            raise SchemaError(f"field {key!r} must be an integer", line=line, field=key)
    label = record.get("label")
    if label not in PREDICTION_LABELS:
        raise SchemaError(f"unknown label {label!r}", line=line, field="label")
    verb = record.get("verb")
    if verb is not None and not isinstance(verb, str):
        raise SchemaError("field 'verb' must be a string or null", line=line, field="verb")
    p = record.get("p")
    if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
        raise SchemaError("field 'p' must be a probability", line=line, field="p")
    return RelationPrediction(
        doc_id=record["doc"], x=record["x"], y=record["y"], label=label, verb=verb, p=float(p)
    )


def write_predictions(predictions: Iterable[RelationPrediction], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for prediction in predictions:
            handle.write(json.dumps(prediction_to_record(prediction), ensure_ascii=False))
            handle.write("\n")


def read_predictions(path: str | Path) -> list[RelationPrediction]:
    predictions = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}", line=line_no) from exc
            predictions.append(prediction_from_record(record, line=line_no))
    return predictions


def curve_csv_text(curve: Sequence[Sequence[float]]) -> str:
    lines = ["threshold,mean_f1"]
    for threshold, mean_f1 in curve:
        lines.append(f"{threshold!r},{mean_f1!r}")
    return "\n".join(lines) + "\n"


def write_curve(curve: Sequence[tuple[float, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(curve_csv_text(curve))


def matrix_from_json_dict(record: dict) -> UsageMatrix:
    if not isinstance(record.get("columns"), list) or not isinstance(
        record.get("rows"), dict
    ):
        raise SchemaError("matrix needs 'columns' and 'rows'")
    columns = tuple(record["columns"])
    counts = {}
    for row, cells in record["rows"].items():
        if len(cells) != len(columns):
            raise SchemaError(f"row {row!r} has {len(cells)} cells for {len(columns)} columns")
        for column, count in zip(columns, cells):
            counts[(row, column)] = count
    return UsageMatrix(rows=tuple(record["rows"]), columns=columns, counts=counts)
