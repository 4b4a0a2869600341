import json
import random
from fractions import Fraction

import pytest

from argmine.corpus.iob2 import TAG_VOCABULARY
from argmine.errors import EmptyInputError, LengthMismatchError, PairMismatchError, SchemaError
from argmine.metrics import (
    NLI_LABELS,
    PRF,
    curve_to_json_dict,
    entity_span_f1,
    nli_label_f1,
    prf_from_json_dict,
    relation_prf,
    report_from_json_dict,
    scarcity_csv_text,
    scarcity_curve,
    write_scarcity_csv,
)

from .oracles import quadratic_span_counts, random_tags

# --- PRF ---------------------------------------------------------------------


def test_prf_hand_values():
    prf = PRF.from_counts(2, 1, 1)
    assert prf.precision == pytest.approx(2 / 3)
    assert prf.recall == pytest.approx(2 / 3)
    assert prf.f1 == pytest.approx(2 / 3)


def test_prf_asymmetric():
    prf = PRF.from_counts(3, 1, 2)
    assert prf.precision == pytest.approx(0.75)
    assert prf.recall == pytest.approx(0.6)
    assert prf.f1 == pytest.approx(2 * 0.75 * 0.6 / 1.35)


def test_prf_zero_denominators():
    assert PRF.from_counts(0, 0, 0) == PRF(0, 0, 0, 0.0, 0.0, 0.0)
    empty_pred = PRF.from_counts(0, 0, 4)
    assert (empty_pred.precision, empty_pred.recall, empty_pred.f1) == (0.0, 0.0, 0.0)
    empty_gold = PRF.from_counts(0, 4, 0)
    assert (empty_gold.precision, empty_gold.recall, empty_gold.f1) == (0.0, 0.0, 0.0)


def test_prf_perfect():
    assert PRF.from_counts(5, 0, 0).f1 == 1.0


def test_prf_json_round_trip():
    prf = PRF.from_counts(2, 1, 1)
    assert prf_from_json_dict(prf.to_json_dict()) == prf


def test_prf_json_validation():
    good = PRF.from_counts(1, 0, 0).to_json_dict()
    prf_from_json_dict(good)
    with pytest.raises(SchemaError):
        prf_from_json_dict({**good, "tp": "1"})
    with pytest.raises(SchemaError):
        prf_from_json_dict({**good, "f1": None})
    with pytest.raises(SchemaError):
        prf_from_json_dict({**good, "tp": True})
    with pytest.raises(SchemaError):
        prf_from_json_dict([good])


# --- entity span F1 ----------------------------------------------------------


def test_span_f1_perfect_match():
    tags = ["B-PREMISE", "I-PREMISE", "O", "B-CLAIM"]
    report = entity_span_f1([tags], [tags])
    assert report.per_label["premise"].f1 == 1.0
    assert report.per_label["claim"].f1 == 1.0
    assert report.micro == PRF.from_counts(2, 0, 0)


def test_span_f1_boundary_miss_costs_both_ways():
    gold = ["B-PREMISE", "I-PREMISE", "O", "O"]
    pred = ["B-PREMISE", "I-PREMISE", "I-PREMISE", "O"]
    report = entity_span_f1([gold], [pred])
    assert report.per_label["premise"] == PRF.from_counts(0, 1, 1)


def test_span_f1_type_confusion():
    gold = ["B-PREMISE", "I-PREMISE"]
    pred = ["B-CLAIM", "I-CLAIM"]
    report = entity_span_f1([gold], [pred])
    assert report.per_label["premise"] == PRF.from_counts(0, 0, 1)
    assert report.per_label["claim"] == PRF.from_counts(0, 1, 0)


def test_span_f1_counts_pool_across_documents():
    gold_a = ["B-PREMISE", "O"]
    pred_a = ["B-PREMISE", "O"]
    gold_b = ["O", "B-PREMISE"]
    pred_b = ["B-PREMISE", "O"]
    report = entity_span_f1([gold_a, gold_b], [pred_a, pred_b])
    assert report.per_label["premise"] == PRF.from_counts(1, 1, 1)


def test_span_f1_length_mismatches():
    with pytest.raises(LengthMismatchError):
        entity_span_f1([["O"]], [["O"], ["O"]])
    with pytest.raises(LengthMismatchError, match="document 0"):
        entity_span_f1([["O", "O"]], [["O"]])


def test_span_f1_against_quadratic_oracle():
    rng = random.Random(0xBADF00D)
    for _ in range(500):
        n = rng.randint(1, 50)
        gold = random_tags(rng, n, TAG_VOCABULARY)
        pred = random_tags(rng, n, TAG_VOCABULARY)
        report = entity_span_f1([gold], [pred])
        oracle = quadratic_span_counts(gold, pred)
        for label in ("premise", "claim"):
            expected = oracle.get(label, (0, 0, 0))
            got = report.per_label[label]
            assert (got.tp, got.fp, got.fn) == expected


# --- relation PRF --------------------------------------------------------------


def test_relation_prf_hand_example():
    golds = {
        ("d", 0, 5): "support",
        ("d", 1, 5): "support",
        ("d", 2, 5): "attack",
        ("d", 3, 5): "no-relation",
        ("d", 4, 5): "no-relation",
    }
    predictions = {
        ("d", 0, 5): "support",      # tp support
        ("d", 1, 5): "attack",       # fn support, fp attack
        ("d", 2, 5): "attack",       # tp attack
        ("d", 3, 5): "support",      # fp support
        ("d", 4, 5): "no-relation",  # true negative, no row
    }
    report = relation_prf(predictions, golds)
    assert report.per_label["support"] == PRF.from_counts(1, 1, 1)
    assert report.per_label["attack"] == PRF.from_counts(1, 1, 0)
    assert report.per_label["support"].f1 == pytest.approx(0.5)
    assert report.per_label["attack"].f1 == pytest.approx(2 / 3)
    assert report.mean_labels == ("support", "attack")
    assert report.mean_f1 == pytest.approx((0.5 + 2 / 3) / 2)


def test_relation_prf_all_no_relation():
    pairs = {("d", 0, 1): "no-relation"}
    report = relation_prf(pairs, pairs)
    assert report.mean_f1 == 0.0


def test_relation_prf_rejects_pair_mismatch():
    golds = {("d", 0, 1): "support"}
    with pytest.raises(PairMismatchError, match="1 missing"):
        relation_prf({}, golds)
    with pytest.raises(PairMismatchError, match="1 extra"):
        relation_prf({("d", 0, 1): "support", ("d", 0, 2): "attack"}, golds)


# --- NLI label F1 ----------------------------------------------------------------


def test_nli_label_f1_hand_example():
    gold = ["entailment", "entailment", "neutral", "contradiction"]
    pred = ["entailment", "neutral", "neutral", "entailment"]
    report = nli_label_f1(pred, gold)
    assert report.per_label["entailment"] == PRF.from_counts(1, 1, 1)
    assert report.per_label["neutral"] == PRF.from_counts(1, 1, 0)
    assert report.per_label["contradiction"] == PRF.from_counts(0, 0, 1)
    assert set(report.per_label) == set(NLI_LABELS)
    assert report.mean_labels is None


def test_nli_label_f1_validation():
    with pytest.raises(LengthMismatchError):
        nli_label_f1(["entailment"], [])
    with pytest.raises(ValueError, match="unknown NLI label"):
        nli_label_f1(["support"], ["entailment"])


# --- report serialization ---------------------------------------------------------


def test_report_json_round_trip():
    golds = {("d", 0, 1): "support", ("d", 0, 2): "attack", ("d", 1, 2): "no-relation"}
    predictions = {("d", 0, 1): "support", ("d", 0, 2): "no-relation", ("d", 1, 2): "attack"}
    report = relation_prf(predictions, golds)
    rebuilt = report_from_json_dict(json.loads(report.to_json()))
    assert rebuilt.per_label == report.per_label
    assert rebuilt.micro == report.micro
    assert rebuilt.mean_labels == report.mean_labels
    assert rebuilt.mean_f1 == pytest.approx(report.mean_f1, abs=1e-9)


def test_report_json_round_trip_without_mean():
    report = entity_span_f1([["B-PREMISE"]], [["B-PREMISE"]])
    rebuilt = report_from_json_dict(report.to_json_dict())
    assert rebuilt.mean_labels is None
    assert rebuilt.mean_f1 is None
    assert rebuilt.per_label == report.per_label


def test_report_json_validation():
    good = entity_span_f1([["O"]], [["O"]]).to_json_dict()
    report_from_json_dict(good)
    with pytest.raises(SchemaError):
        report_from_json_dict({"per_label": {}})
    with pytest.raises(SchemaError):
        report_from_json_dict({**good, "micro": "x"})
    with pytest.raises(SchemaError):
        report_from_json_dict({**good, "mean_labels": "support", "mean_f1": 0.5})
    with pytest.raises(SchemaError):
        report_from_json_dict({**good, "mean_labels": ["support"], "mean_f1": None})


def test_report_text_layout():
    golds = {("d", 0, 1): "support"}
    report = relation_prf(golds, golds)
    text = report.to_text()
    lines = text.splitlines()
    assert lines[0].split() == ["label", "precision", "recall", "f1", "tp", "fp", "fn"]
    assert lines[1].startswith("support")
    assert "1.0000" in lines[1]
    assert lines[-1] == "mean f1 (support/attack): 0.5000"


# --- scarcity curve ------------------------------------------------------------------


def _report_with_mean(mean):
    golds = {("d", 0, 1): "support"}
    base = relation_prf(golds, golds)
    return type(base)(
        per_label=base.per_label, micro=base.micro, mean_labels=base.mean_labels, mean_f1=mean
    )


def test_scarcity_curve_sorts_and_converts():
    runs = [
        ("1", _report_with_mean(0.9)),
        (0.05, _report_with_mean(0.3)),
        (Fraction(1, 5), _report_with_mean(0.6)),
    ]
    curve = scarcity_curve(runs)
    assert curve == [
        (Fraction(1, 20), 0.3),
        (Fraction(1, 5), 0.6),
        (Fraction(1), 0.9),
    ]
    assert all(isinstance(f, Fraction) for f, _ in curve)


def test_scarcity_curve_rejects_empty_and_meanless():
    with pytest.raises(EmptyInputError):
        scarcity_curve([])
    bare = entity_span_f1([["O"]], [["O"]])
    with pytest.raises(ValueError, match="mean F1"):
        scarcity_curve([(0.5, bare)])


def test_scarcity_csv_text(tmp_path):
    curve = [(Fraction(1, 20), 0.3), (Fraction(1), 0.9)]
    text = scarcity_csv_text(curve)
    lines = text.splitlines()
    assert lines[0] == "fraction,mean_f1"
    assert lines[1] == "0.05,0.3"
    assert lines[2] == "1.0,0.9"
    assert text.endswith("\n")
    path = tmp_path / "curve.csv"
    write_scarcity_csv(curve, path)
    assert path.read_text(encoding="utf-8") == text


def test_curve_to_json_dict():
    curve = [(Fraction(1, 4), 0.25)]
    assert curve_to_json_dict(curve) == [{"fraction": 0.25, "mean_f1": 0.25}]
