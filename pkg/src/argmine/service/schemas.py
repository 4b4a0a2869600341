"""Request and response models for the pipeline service.

Corpus documents, dataset examples and predictions travel as the same JSON
objects used in the on-disk JSONL formats; the core parsers own their
validation, so these envelopes only type the surrounding fields.
"""

from __future__ import annotations

from pydantic import BaseModel


class ScorerSpec(BaseModel):
    kind: str = "heuristic"
    # fixture scorers: inline entries keep the service stateless; a path is
    # honored too for local use.
    entries: list[dict] | None = None
    path: str | None = None
    # remote scorers
    endpoint: str | None = None
    timeout: float = 30.0
    max_batch: int = 16
    max_in_flight: int = 4


class VerbsSpec(BaseModel):
    attack: list[str]
    support: list[str]


class DocumentsRequest(BaseModel):
    documents: list[dict]


class ValidateResponse(BaseModel):
    valid: bool
    documents: int
    errors: list[str]


class StatsResponse(BaseModel):
    documents: int
    entities: dict[str, int]
    relations: dict[str, int]
    per_section: dict[str, dict[str, int]]


class SplitRequest(BaseModel):
    documents: list[dict]
    train: float | str = 0.7
    dev: float | str = 0.1
    test: float | str = 0.2
    seed: int = 42


class SplitResponse(BaseModel):
    train: list[dict]
    dev: list[dict]
    test: list[dict]


class FilterSectionsRequest(BaseModel):
    documents: list[dict]
    keep: list[str]


class DocumentsResponse(BaseModel):
    documents: list[dict]


class GraphDotRequest(BaseModel):
    documents: list[dict]
    boilerplate: bool = True
    patterns: list[str] | None = None


class GraphDotResponse(BaseModel):
    dot: str


class GenerateRequest(BaseModel):
    documents: list[dict]
    strategy: str
    seed: int = 42
    fraction: float | str = 1.0
    balance: bool = False
    verbs: VerbsSpec | None = None
    patterns: list[str] | None = None


class ExamplesResponse(BaseModel):
    examples: list[dict]
    meta: dict


class SubsampleRequest(BaseModel):
    examples: list[dict]
    fraction: float | str
    seed: int = 42


class ClassifyRequest(BaseModel):
    documents: list[dict]
    scorer: ScorerSpec = ScorerSpec()
    threshold: float = 0.2
    pairs: str = "candidates"
    strict_gt: bool = False
    verbs: VerbsSpec | None = None
    patterns: list[str] | None = None


class PredictionsResponse(BaseModel):
    predictions: list[dict]


class TuneRequest(BaseModel):
    documents: list[dict]
    scorer: ScorerSpec = ScorerSpec()
    strict_gt: bool = False
    verbs: VerbsSpec | None = None
    patterns: list[str] | None = None


class TuneResponse(BaseModel):
    best_threshold: float
    best_mean_f1: float
    curve: list[list[float]]


class VerbMatrixRequest(BaseModel):
    documents: list[dict]
    predictions: list[dict]
    verbs: VerbsSpec | None = None
    patterns: list[str] | None = None


class MatrixResponse(BaseModel):
    columns: list[str]
    rows: dict[str, list[int]]


class EvalEntitiesRequest(BaseModel):
    gold_documents: list[dict]
    pred_documents: list[dict]


class ReportResponse(BaseModel):
    per_label: dict[str, dict]
    micro: dict
    mean_labels: list[str] | None = None
    mean_f1: float | None = None


class EvalRelationsRequest(BaseModel):
    documents: list[dict]
    predictions: list[dict]
    patterns: list[str] | None = None


class EvalNliRequest(BaseModel):
    gold_labels: list[str]
    pred_labels: list[str]


class CurveRun(BaseModel):
    fraction: float | str
    report: dict


class CurveRequest(BaseModel):
    runs: list[CurveRun]


class CurveResponse(BaseModel):
    rows: list[dict]


class HealthResponse(BaseModel):
    status: str
    version: str
