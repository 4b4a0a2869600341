"""Entailment scorers: fixture lookup, offline heuristic, remote client.

Every scorer answers one premise against a batch of hypotheses with
probability triples. The remote client speaks the wire protocol documented
in protocol/PROTOCOL.md and enforces the triple invariants on responses
instead of trusting the server.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Protocol

import httpx

from argmine.errors import (
    BadScoresError,
    DuplicateKeyError,
    EmptyInputError,
    FixtureMissError,
    ProtocolError,
    SchemaError,
    ScorerTimeoutError,
    TransportError,
)

SUM_TOLERANCE = 1e-6
# Remote triples may be off by serialization rounding; anything worse than
# this is a server bug, not noise.
RENORMALIZE_TOLERANCE = 1e-3


@dataclass(frozen=True, slots=True)
class EntailmentScores:
    entailment: float
    neutral: float
    contradiction: float

    def __post_init__(self) -> None:
        for name in ("entailment", "neutral", "contradiction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} probability out of [0, 1]: {value}")
        total = self.entailment + self.neutral + self.contradiction
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"scores sum to {total}, expected 1 within {SUM_TOLERANCE}")


class Scorer(Protocol):
    def score_batch(
        self, premise: str, hypotheses: Sequence[str]
    ) -> list[EntailmentScores]: ...


def _require_hypotheses(hypotheses: Sequence[str]) -> None:
    if not hypotheses:
        raise EmptyInputError("hypotheses batch is empty")


class HeuristicScorer:
    """Deterministic token-overlap stand-in for a neural NLI model.

    With o the fraction of distinct hypothesis tokens present in the premise
    (lowercased, whitespace split), the triple is
    (0.1 + 0.8*o, (0.9 - 0.8*o) / 2, (0.9 - 0.8*o) / 2). Computed in exact
    rationals and rounded once, so the endpoints land on the literal floats
    0.9/0.05/0.05 and 0.1/0.45/0.45.
    """

    def score_batch(
        self, premise: str, hypotheses: Sequence[str]
    ) -> list[EntailmentScores]:
        _require_hypotheses(hypotheses)
        premise_tokens = set(premise.lower().split())
        scores = []
        for hypothesis in hypotheses:
            tokens = set(hypothesis.lower().split())
            m = len(tokens)
            k = len(tokens & premise_tokens)
            if m == 0:
                overlap_num, overlap_den = 0, 1  # empty hypothesis scores as zero overlap
            else:
                overlap_num, overlap_den = k, m
            entail = Fraction(overlap_den + 8 * overlap_num, 10 * overlap_den)
            other = Fraction(9 * overlap_den - 8 * overlap_num, 20 * overlap_den)
            scores.append(EntailmentScores(float(entail), float(other), float(other)))
        return scores


class FixtureScorer:
    """Exact-match lookup over recorded (premise, hypothesis) pairs."""

    def __init__(self, table: dict[tuple[str, str], EntailmentScores]):
        self._table = dict(table)

    def __len__(self) -> int:
        return len(self._table)

    def score_batch(
        self, premise: str, hypotheses: Sequence[str]
    ) -> list[EntailmentScores]:
        _require_hypotheses(hypotheses)
        scores = []
        for hypothesis in hypotheses:
            try:
                scores.append(self._table[(premise, hypothesis)])
            except KeyError:
                raise FixtureMissError(premise, hypothesis) from None
        return scores


def fixture_entries(path: str | Path) -> list[dict]:
    entries = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc}", line=line_no) from exc
            entries.append(_check_fixture_record(record, line_no))
    return entries


def _check_fixture_record(record: dict, line: int | None) -> dict:
    if not isinstance(record, dict):
        raise SchemaError("fixture record must be an object", line=line)
    for key in ("premise", "hypothesis"):
        if not isinstance(record.get(key), str):
            raise SchemaError(f"missing or non-string field {key!r}", line=line, field=key)
    for key in ("entailment", "neutral", "contradiction"):
        value = record.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"field {key!r} must be a number", line=line, field=key)
    return record


def fixture_from_entries(entries: Iterable[dict]) -> FixtureScorer:
    table: dict[tuple[str, str], EntailmentScores] = {}
    for i, record in enumerate(entries, start=1):
        record = _check_fixture_record(record, line=i)
        key = (record["premise"], record["hypothesis"])
        triple = EntailmentScores(
            float(record["entailment"]),
            float(record["neutral"]),
            float(record["contradiction"]),
        )
        if key in table and table[key] != triple:
            raise DuplicateKeyError(
                f"conflicting fixture triples for premise/hypothesis pair: {key[1]!r}"
            )
        table[key] = triple
    return FixtureScorer(table)


def load_fixture(path: str | Path) -> FixtureScorer:
    return fixture_from_entries(fixture_entries(path))


class RemoteScorer:
    """Client for the POST /v1/score wire protocol.

    Batches over ``max_batch`` are split into chunks scored by at most
    ``max_in_flight`` concurrent requests; results are re-assembled in
    order. Triples whose sum drifts within RENORMALIZE_TOLERANCE are
    renormalized, anything worse raises BadScoresError.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        max_batch: int = 16,
        max_in_flight: int = 4,
        client: httpx.Client | None = None,
    ):
        if timeout <= 0:
            raise ValueError(f"timeout must be positive, got {timeout}")
        if max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {max_batch}")
        if max_in_flight < 1:
            raise ValueError(f"max_in_flight must be >= 1, got {max_in_flight}")
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.max_batch = max_batch
        self.max_in_flight = max_in_flight
        self._owns_client = client is None
        self._client = client if client is not None else httpx.Client()

    def close(self) -> None:
        if self._owns_client:
            self._client.close()

    def __enter__(self) -> RemoteScorer:
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def score_batch(
        self, premise: str, hypotheses: Sequence[str]
    ) -> list[EntailmentScores]:
        _require_hypotheses(hypotheses)
        chunks = [
            list(hypotheses[i : i + self.max_batch])
            for i in range(0, len(hypotheses), self.max_batch)
        ]
        if len(chunks) == 1:
            return self._score_chunk(premise, chunks[0])
        workers = min(self.max_in_flight, len(chunks))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(self._score_chunk, premise, chunk) for chunk in chunks]
            results = [f.result() for f in futures]
        return [triple for chunk_scores in results for triple in chunk_scores]

    def _score_chunk(self, premise: str, chunk: list[str]) -> list[EntailmentScores]:
        try:
            response = self._client.post(
                f"{self.endpoint}/v1/score",
                json={"premise": premise, "hypotheses": chunk},
                timeout=self.timeout,
            )
        except httpx.TimeoutException as exc:
            raise ScorerTimeoutError(f"scorer timed out after {self.timeout}s") from exc
        except httpx.HTTPError as exc:
            raise TransportError(f"scorer request failed: {exc}") from exc
        if response.status_code != 200:
            raise ProtocolError(
                f"scorer returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise ProtocolError(f"scorer response is not JSON: {exc}") from exc
        scores = body.get("scores") if isinstance(body, dict) else None
        if not isinstance(scores, list) or len(scores) != len(chunk):
            raise ProtocolError(
                f"expected {len(chunk)} score triples, got "
                f"{len(scores) if isinstance(scores, list) else type(scores).__name__}"
            )
        return [_validate_remote_triple(item) for item in scores]


def _validate_remote_triple(item: object) -> EntailmentScores:
    if not isinstance(item, dict):
        raise ProtocolError(f"score entry must be an object, got {type(item).__name__}")
    values = []
    for key in ("entailment", "neutral", "contradiction"):
        value = item.get(key)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ProtocolError(f"score entry missing numeric field {key!r}")
        values.append(float(value))
    if any(v < 0.0 or v > 1.0 + RENORMALIZE_TOLERANCE for v in values):
        raise BadScoresError(f"probability out of range in {values}")
    total = sum(values)
    if abs(total - 1.0) > RENORMALIZE_TOLERANCE:
        raise BadScoresError(f"scores sum to {total}, beyond renormalization tolerance")
    if total != 1.0:
        values = [v / total for v in values]
    return EntailmentScores(*values)


def build_scorer(
    kind: str,
    *,
    path: str | Path | None = None,
    entries: Iterable[dict] | None = None,
    endpoint: str | None = None,
    timeout: float = 30.0,
    max_batch: int = 16,
    max_in_flight: int = 4,
    client: httpx.Client | None = None,
) -> Scorer:
    """Construct a scorer from configuration values.

    Fixture scorers accept either a file path or inline entries (the service
    API sends entries inline so the server stays stateless).
    """
    if kind == "heuristic":
        return HeuristicScorer()
    if kind == "fixture":
        if entries is not None:
            return fixture_from_entries(entries)
        if path is not None:
            return load_fixture(path)
        raise ValueError("fixture scorer needs a path or inline entries")
    if kind == "remote":
        if not endpoint:
            raise ValueError("remote scorer needs an endpoint")
        return RemoteScorer(
            endpoint,
            timeout=timeout,
            max_batch=max_batch,
            max_in_flight=max_in_flight,
            client=client,
        )
    raise ValueError(f"unknown scorer kind {kind!r}")
