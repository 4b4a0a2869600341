"""Checkpoint loading and batched premise/hypothesis scoring."""

from __future__ import annotations

import threading
from typing import Mapping, Sequence

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

CANONICAL_LABELS = ("entailment", "neutral", "contradiction")

# Stems cover the spellings seen across published NLI checkpoints
# ("ENTAILMENT", "entails", "contradiction", ...).
_LABEL_STEMS = (
    ("entail", "entailment"),
    ("neutral", "neutral"),
    ("contra", "contradiction"),
)


def label_columns(id2label: Mapping[int | str, str]) -> dict[str, int]:
    """Map canonical NLI labels onto logit columns via checkpoint metadata.

    Checkpoints disagree on class order, so the mapping is derived from the
    checkpoint's own ``id2label`` by case-insensitive stem matching and is
    never assumed. Raises ``ValueError`` when a label is unrecognisable,
    duplicated, or missing.
    """
    columns: dict[str, int] = {}
    for raw_index, raw_name in id2label.items():
        name = raw_name.lower()
        for stem, canonical in _LABEL_STEMS:
            if stem in name:
                if canonical in columns:
                    raise ValueError(
                        f"label {canonical!r} appears twice in checkpoint "
                        f"metadata {dict(id2label)!r}"
                    )
                columns[canonical] = int(raw_index)
                break
        else:
            raise ValueError(
                f"unrecognisable NLI label {raw_name!r} in checkpoint metadata"
            )
    missing = [label for label in CANONICAL_LABELS if label not in columns]
    if missing:
        raise ValueError(
            "checkpoint metadata is missing NLI labels: " + ", ".join(missing)
        )
    return columns


class NliModel:
    """A loaded sequence-pair classifier with a thread-safe scoring call."""

    def __init__(self, model, tokenizer, columns: dict[str, int], max_length: int):
        self._model = model
        self._tokenizer = tokenizer
        self._columns = columns
        self._max_length = max_length
        # The underlying module is not safe under concurrent forward calls.
        self._lock = threading.Lock()

    @classmethod
    def load(cls, checkpoint: str, device: str = "cpu") -> "NliModel":
        tokenizer = AutoTokenizer.from_pretrained(checkpoint)
        model = AutoModelForSequenceClassification.from_pretrained(checkpoint)
        model.to(torch.device(device))
        model.eval()
        columns = label_columns(model.config.id2label)
        # Tokenizers built from bare vocab files report a sentinel "no limit";
        # fall back to the position-embedding budget so long premises truncate
        # instead of crashing the forward pass.
        limit = tokenizer.model_max_length
        if limit is None or limit > 1_000_000:
            limit = int(getattr(model.config, "max_position_embeddings", 512))
        return cls(model=model, tokenizer=tokenizer, columns=columns, max_length=limit)

    def score(self, premise: str, hypotheses: Sequence[str]) -> list[dict[str, float]]:
        """Return one probability triple per hypothesis, in request order."""
        pairs = list(hypotheses)
        with self._lock:
            encoded = self._tokenizer(
                [premise] * len(pairs),
                pairs,
                padding=True,
                truncation=True,
                max_length=self._max_length,
                return_tensors="pt",
            )
            encoded = {key: tensor.to(self._model.device) for key, tensor in encoded.items()}
            with torch.no_grad():
                logits = self._model(**encoded).logits
            probabilities = torch.softmax(logits, dim=-1).cpu()
        return [
            {label: float(row[self._columns[label]]) for label in CANONICAL_LABELS}
            for row in probabilities
        ]
