"""Evaluation metrics: strict span F1, relation F1, NLI label F1, curves.

All precision/recall denominators of zero yield 0.0 rather than an error so
that degenerate runs (empty predictions, empty gold) still produce reports.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from argmine.corpus.iob2 import decode_untyped_sections
from argmine.corpus.model import ATTACK, CLAIM, PREMISE, SUPPORT
from argmine.errors import (
    EmptyInputError,
    LengthMismatchError,
    PairMismatchError,
    SchemaError,
)

NLI_LABELS = ("entailment", "neutral", "contradiction")


@dataclass(frozen=True, slots=True)
class PRF:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> PRF:
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f1=f1)

    def to_json_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
        }


@dataclass(frozen=True)
class EvalReport:
    """Per-label scores plus a micro average; micro counts are the per-label
    sums, so micro precision/recall follow the pooled-count definition."""

    per_label: dict[str, PRF]
    micro: PRF
    mean_labels: tuple[str, ...] | None = None
    mean_f1: float | None = None

    def to_json_dict(self) -> dict:
        out: dict = {
            "per_label": {label: prf.to_json_dict() for label, prf in self.per_label.items()},
            "micro": self.micro.to_json_dict(),
        }
        if self.mean_labels is not None:
            out["mean_labels"] = list(self.mean_labels)
            out["mean_f1"] = self.mean_f1
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        header = ("label", "precision", "recall", "f1", "tp", "fp", "fn")
        rows = [header]
        for label, prf in list(self.per_label.items()) + [("micro", self.micro)]:
            rows.append(
                (
                    label,
                    f"{prf.precision:.4f}",
                    f"{prf.recall:.4f}",
                    f"{prf.f1:.4f}",
                    str(prf.tp),
                    str(prf.fp),
                    str(prf.fn),
                )
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in rows
        ]
        if self.mean_labels is not None:
            lines.append(f"mean f1 ({'/'.join(self.mean_labels)}): {self.mean_f1:.4f}")
        return "\n".join(lines)


def _report(counts: dict[str, tuple[int, int, int]], mean_labels: tuple[str, ...] | None) -> EvalReport:
    per_label = {label: PRF.from_counts(*c) for label, c in counts.items()}
    micro = PRF.from_counts(
        sum(c[0] for c in counts.values()),
        sum(c[1] for c in counts.values()),
        sum(c[2] for c in counts.values()),
    )
    mean_f1 = None
    if mean_labels is not None:
        mean_f1 = sum(per_label[label].f1 for label in mean_labels) / len(mean_labels)
    return EvalReport(per_label=per_label, micro=micro, mean_labels=mean_labels, mean_f1=mean_f1)


def entity_span_f1(
    gold_docs: Sequence[Sequence[str]], pred_docs: Sequence[Sequence[str]]
) -> EvalReport:
    """Strict span match over IOB2 tag sequences, one pair per document.

    A predicted span counts only on exact (type, start, end) identity with a
    gold span. Both sides are decoded with the same repair policy, so lone
    I- tags are scored as the spans they decode to.
    """
    if len(gold_docs) != len(pred_docs):
        raise LengthMismatchError(
            f"{len(gold_docs)} gold documents vs {len(pred_docs)} predicted"
        )
    counts = {PREMISE: [0, 0, 0], CLAIM: [0, 0, 0]}
    for i, (gold_tags, pred_tags) in enumerate(zip(gold_docs, pred_docs)):
        if len(gold_tags) != len(pred_tags):
            raise LengthMismatchError(
                f"document {i}: {len(gold_tags)} gold tags vs {len(pred_tags)} predicted"
            )
        gold_spans = set(decode_untyped_sections(gold_tags))
        pred_spans = set(decode_untyped_sections(pred_tags))
        for label in (PREMISE, CLAIM):
            gold_of = {s for s in gold_spans if s[0] == label}
            pred_of = {s for s in pred_spans if s[0] == label}
            counts[label][0] += len(gold_of & pred_of)
            counts[label][1] += len(pred_of - gold_of)
            counts[label][2] += len(gold_of - pred_of)
    return _report({k: tuple(v) for k, v in counts.items()}, mean_labels=None)


def relation_prf(predictions: Mapping, golds: Mapping) -> EvalReport:
    """Per-class PRF for Support and Attack over identical pair sets.

    NoRelation is the negative class: it earns no row, only precision hits
    on wrong positive predictions and recall misses on unfound relations.
    The headline number is the arithmetic mean of the two class F1s.
    """
    if set(predictions) != set(golds):
        missing = len(set(golds) - set(predictions))
        extra = len(set(predictions) - set(golds))
        raise PairMismatchError(
            f"prediction and gold pair sets differ ({missing} missing, {extra} extra)"
        )
    counts = {}
    for label in (SUPPORT, ATTACK):
        tp = sum(1 for k in golds if golds[k] == label and predictions[k] == label)
        fp = sum(1 for k in golds if predictions[k] == label and golds[k] != label)
        fn = sum(1 for k in golds if golds[k] == label and predictions[k] != label)
        counts[label] = (tp, fp, fn)
    return _report(counts, mean_labels=(SUPPORT, ATTACK))


def nli_label_f1(pred_labels: Sequence[str], gold_labels: Sequence[str]) -> EvalReport:
    """Per-label PRF over the three NLI labels; entailment F1 is the
    model-selection metric and sits in per_label["entailment"]."""
    if len(pred_labels) != len(gold_labels):
        raise LengthMismatchError(
            f"{len(pred_labels)} predictions vs {len(gold_labels)} golds"
        )
    for value in (*pred_labels, *gold_labels):
        if value not in NLI_LABELS:
            raise ValueError(f"unknown NLI label {value!r}")
    counts = {}
    for label in NLI_LABELS:
        tp = sum(1 for p, g in zip(pred_labels, gold_labels) if p == g == label)
        fp = sum(1 for p, g in zip(pred_labels, gold_labels) if p == label != g)
        fn = sum(1 for p, g in zip(pred_labels, gold_labels) if g == label != p)
        counts[label] = (tp, fp, fn)
    return _report(counts, mean_labels=None)


def prf_from_json_dict(record: dict) -> PRF:
    if not isinstance(record, dict):
        raise SchemaError("PRF record must be an object")
    for key in ("tp", "fp", "fn"):
        if not isinstance(record.get(key), int) or isinstance(record.get(key), bool):
            raise SchemaError(f"field {key!r} must be an integer", field=key)
    for key in ("precision", "recall", "f1"):
        value = record.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"field {key!r} must be a number", field=key)
    return PRF(
        tp=record["tp"],
        fp=record["fp"],
        fn=record["fn"],
        precision=float(record["precision"]),
        recall=float(record["recall"]),
        f1=float(record["f1"]),
    )


def report_from_json_dict(record: dict) -> EvalReport:
    """Inverse of EvalReport.to_json_dict, for reading stored reports."""
    if not isinstance(record, dict):
        raise SchemaError("report must be an object")
    if not isinstance(record.get("per_label"), dict) or not isinstance(
        record.get("micro"), dict
    ):
        raise SchemaError("report needs 'per_label' and 'micro' objects")
    per_label = {
        str(label): prf_from_json_dict(prf) for label, prf in record["per_label"].items()
    }
    mean_labels = record.get("mean_labels")
    mean_f1 = record.get("mean_f1")
    if mean_labels is not None:
        if not isinstance(mean_labels, list) or not all(
            isinstance(v, str) for v in mean_labels
        ):
            raise SchemaError("field 'mean_labels' must be a list of strings")
        if isinstance(mean_f1, bool) or not isinstance(mean_f1, (int, float)):
            raise SchemaError("field 'mean_f1' must be a number")
        mean_f1 = float(mean_f1)
        mean_labels = tuple(mean_labels)
    return EvalReport(
        per_label=per_label,
        micro=prf_from_json_dict(record["micro"]),
        mean_labels=mean_labels,
        mean_f1=mean_f1,
    )


def scarcity_curve(
    runs: Sequence[tuple[float | str | Fraction, EvalReport]],
) -> list[tuple[Fraction, float]]:
    """(fraction, mean relation F1) rows sorted by fraction, for plotting
    performance against training-data size."""
    if not runs:
        raise EmptyInputError("scarcity curve needs at least one run")
    rows = []
    for fraction, report in runs:
        if report.mean_f1 is None:
            raise ValueError(f"report for fraction {fraction} carries no mean F1")
        value = Fraction(str(fraction)) if isinstance(fraction, float) else Fraction(fraction)
        rows.append((value, report.mean_f1))
    rows.sort(key=lambda r: r[0])
    return rows


def scarcity_csv_text(curve: Sequence[tuple[float | Fraction, float]]) -> str:
    lines = ["fraction,mean_f1"]
    for fraction, mean_f1 in curve:
        lines.append(f"{float(fraction)!r},{mean_f1!r}")
    return "\n".join(lines) + "\n"


def write_scarcity_csv(curve: Sequence[tuple[Fraction, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(scarcity_csv_text(curve))


def curve_to_json_dict(curve: Sequence[tuple[Fraction, float]]) -> list[dict]:
    return [{"fraction": float(f), "mean_f1": m} for f, m in curve]
