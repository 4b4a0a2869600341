"""FastAPI service exposing the pipeline.

Every route body lives in a plain ``do_*`` function taking and returning
the pydantic models from schemas.py; the CLI's local backend calls those
functions directly, so HTTP is a transport, never a requirement.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from argmine import __version__
from argmine.corpus.model import Document, SplitSpec
from argmine.corpus.io import document_to_record, parse_document_record
from argmine.corpus.ops import (
    DEFAULT_BOILERPLATE_PATTERNS,
    corpus_stats,
    filter_boilerplate,
    section_filter,
    split_corpus,
)
from argmine.errors import ArgmineError, PairMismatchError, SchemaError
from argmine.graph import build_graph, to_dot
from argmine.metrics import (
    curve_to_json_dict,
    entity_span_f1,
    nli_label_f1,
    relation_prf,
    report_from_json_dict,
    scarcity_curve,
)
from argmine.nli import (
    DEFAULT_VERBALIZATIONS,
    CONTRADICTION,
    ENTAILMENT,
    NEUTRAL,
    DatasetConfig,
    VerbalizationSet,
    build_dataset,
    example_from_record,
    example_to_record,
    subsample_training,
)
from argmine.scoring import build_scorer
from argmine.service import schemas
from argmine.util import as_fraction
from argmine.zeroshot import (
    classify_corpus,
    gold_labels_for,
    prediction_from_record,
    prediction_to_record,
    tune_threshold,
    verbalization_usage,
)


def _parse_documents(records: list[dict]) -> list[Document]:
    return [parse_document_record(r, line=i) for i, r in enumerate(records, start=1)]


def _parse_examples(records: list[dict]):
    return [example_from_record(r, line=i) for i, r in enumerate(records, start=1)]


def _parse_predictions(records: list[dict]):
    return [prediction_from_record(r, line=i) for i, r in enumerate(records, start=1)]


def _verbs(spec: schemas.VerbsSpec | None) -> VerbalizationSet:
    if spec is None:
        return DEFAULT_VERBALIZATIONS
    return VerbalizationSet(attack_verbs=tuple(spec.attack), support_verbs=tuple(spec.support))


def _patterns(patterns: list[str] | None) -> tuple[str, ...]:
    return tuple(patterns) if patterns is not None else DEFAULT_BOILERPLATE_PATTERNS


def do_validate(req: schemas.DocumentsRequest) -> schemas.ValidateResponse:
    errors = []
    parsed = 0
    for i, record in enumerate(req.documents, start=1):
        try:
            parse_document_record(record, line=i)
            parsed += 1
        except ArgmineError as exc:
            errors.append(str(exc))
    return schemas.ValidateResponse(valid=not errors, documents=parsed, errors=errors)


def do_stats(req: schemas.DocumentsRequest) -> schemas.StatsResponse:
    report = corpus_stats(_parse_documents(req.documents))
    return schemas.StatsResponse(**report.to_json_dict())


def do_split(req: schemas.SplitRequest) -> schemas.SplitResponse:
    spec = SplitSpec.of(req.train, req.dev, req.test, seed=req.seed)
    train, dev, test = split_corpus(_parse_documents(req.documents), spec)
    return schemas.SplitResponse(
        train=[document_to_record(d) for d in train],
        dev=[document_to_record(d) for d in dev],
        test=[document_to_record(d) for d in test],
    )


def do_filter_sections(req: schemas.FilterSectionsRequest) -> schemas.DocumentsResponse:
    filtered = section_filter(_parse_documents(req.documents), set(req.keep))
    return schemas.DocumentsResponse(documents=[document_to_record(d) for d in filtered])


def do_graph_dot(req: schemas.GraphDotRequest) -> schemas.GraphDotResponse:
    chunks = []
    for doc in _parse_documents(req.documents):
        spans = filter_boilerplate(doc, _patterns(req.patterns)) if req.boilerplate else None
        chunks.append(to_dot(build_graph(doc, spans)))
    return schemas.GraphDotResponse(dot="\n".join(chunks))


def do_generate(req: schemas.GenerateRequest) -> schemas.ExamplesResponse:
    config = DatasetConfig(
        strategy=req.strategy,
        seed=req.seed,
        verbalizations=_verbs(req.verbs),
        fraction=as_fraction(req.fraction),
        balance=req.balance,
    )
    examples = build_dataset(_parse_documents(req.documents), config, _patterns(req.patterns))
    meta = {
        "strategy": req.strategy,
        "seed": req.seed,
        "fraction": float(config.fraction),
        "balance": req.balance,
        "examples": len(examples),
        "entailment": sum(1 for e in examples if e.label == ENTAILMENT),
        "contradiction": sum(1 for e in examples if e.label == CONTRADICTION),
        "neutral": sum(1 for e in examples if e.label == NEUTRAL),
    }
    return schemas.ExamplesResponse(
        examples=[example_to_record(e) for e in examples], meta=meta
    )


def do_subsample(req: schemas.SubsampleRequest) -> schemas.ExamplesResponse:
    kept = subsample_training(_parse_examples(req.examples), req.fraction, req.seed)
    meta = {
        "seed": req.seed,
        "fraction": float(as_fraction(req.fraction)),
        "examples": len(kept),
    }
    return schemas.ExamplesResponse(examples=[example_to_record(e) for e in kept], meta=meta)


def do_classify(req: schemas.ClassifyRequest) -> schemas.PredictionsResponse:
    scorer = build_scorer(
        req.scorer.kind,
        path=req.scorer.path,
        entries=req.scorer.entries,
        endpoint=req.scorer.endpoint,
        timeout=req.scorer.timeout,
        max_batch=req.scorer.max_batch,
        max_in_flight=req.scorer.max_in_flight,
    )
    predictions = classify_corpus(
        _parse_documents(req.documents),
        _verbs(req.verbs),
        scorer,
        req.threshold,
        pairs=req.pairs,
        strict_gt=req.strict_gt,
        patterns=_patterns(req.patterns),
    )
    return schemas.PredictionsResponse(
        predictions=[prediction_to_record(p) for p in predictions]
    )


def do_tune(req: schemas.TuneRequest) -> schemas.TuneResponse:
    documents = _parse_documents(req.documents)
    scorer = build_scorer(
        req.scorer.kind,
        path=req.scorer.path,
        entries=req.scorer.entries,
        endpoint=req.scorer.endpoint,
        timeout=req.scorer.timeout,
        max_batch=req.scorer.max_batch,
        max_in_flight=req.scorer.max_in_flight,
    )
    patterns = _patterns(req.patterns)
    # Ungated pass over every pair, annotated ones included: tuning needs
    # gold positives to have a non-degenerate F1 surface.
    predictions = classify_corpus(
        documents, _verbs(req.verbs), scorer, 0.0, pairs="all", patterns=patterns
    )
    golds = gold_labels_for(documents, (p.pair for p in predictions), patterns)
    result = tune_threshold(
        [(p, golds[p.pair]) for p in predictions], strict_gt=req.strict_gt
    )
    return schemas.TuneResponse(
        best_threshold=result.best_threshold,
        best_mean_f1=result.best_mean_f1,
        curve=[[t, f] for t, f in result.curve],
    )


def do_verb_matrix(req: schemas.VerbMatrixRequest) -> schemas.MatrixResponse:
    documents = _parse_documents(req.documents)
    predictions = _parse_predictions(req.predictions)
    patterns = _patterns(req.patterns)
    golds = gold_labels_for(documents, (p.pair for p in predictions), patterns)
    matrix = verbalization_usage(
        predictions, [golds[p.pair] for p in predictions], _verbs(req.verbs)
    )
    return schemas.MatrixResponse(**matrix.to_json_dict())


def do_eval_entities(req: schemas.EvalEntitiesRequest) -> schemas.ReportResponse:
    gold_docs = {d.id: d for d in _parse_documents(req.gold_documents)}
    pred_docs = {d.id: d for d in _parse_documents(req.pred_documents)}
    if set(gold_docs) != set(pred_docs):
        raise PairMismatchError("gold and predicted corpora cover different documents")
    ids = sorted(gold_docs)
    report = entity_span_f1(
        [gold_docs[i].tags for i in ids], [pred_docs[i].tags for i in ids]
    )
    return schemas.ReportResponse(**report.to_json_dict())


def do_eval_relations(req: schemas.EvalRelationsRequest) -> schemas.ReportResponse:
    documents = _parse_documents(req.documents)
    predictions = _parse_predictions(req.predictions)
    if len({p.pair for p in predictions}) != len(predictions):
        raise SchemaError("duplicate prediction pairs")
    golds = gold_labels_for(documents, (p.pair for p in predictions), _patterns(req.patterns))
    report = relation_prf({p.pair: p.label for p in predictions}, golds)
    return schemas.ReportResponse(**report.to_json_dict())


def do_eval_nli(req: schemas.EvalNliRequest) -> schemas.ReportResponse:
    report = nli_label_f1(req.pred_labels, req.gold_labels)
    return schemas.ReportResponse(**report.to_json_dict())


def do_curve(req: schemas.CurveRequest) -> schemas.CurveResponse:
    runs = [(run.fraction, report_from_json_dict(run.report)) for run in req.runs]
    return schemas.CurveResponse(rows=curve_to_json_dict(scarcity_curve(runs)))


def create_app() -> FastAPI:
    app = FastAPI(title="argmine", version=__version__)

    @app.exception_handler(ArgmineError)
    async def domain_error(request, exc: ArgmineError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/healthz", response_model=schemas.HealthResponse)
    def healthz():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/v1/corpus/validate", response_model=schemas.ValidateResponse)
    def corpus_validate(req: schemas.DocumentsRequest):
        return do_validate(req)

    @app.post("/v1/corpus/stats", response_model=schemas.StatsResponse)
    def corpus_stats_route(req: schemas.DocumentsRequest):
        return do_stats(req)

    @app.post("/v1/corpus/split", response_model=schemas.SplitResponse)
    def corpus_split(req: schemas.SplitRequest):
        return do_split(req)

    @app.post("/v1/corpus/filter-sections", response_model=schemas.DocumentsResponse)
    def corpus_filter_sections(req: schemas.FilterSectionsRequest):
        return do_filter_sections(req)

    @app.post("/v1/corpus/graph-dot", response_model=schemas.GraphDotResponse)
    def corpus_graph_dot(req: schemas.GraphDotRequest):
        return do_graph_dot(req)

    @app.post("/v1/nli/generate", response_model=schemas.ExamplesResponse)
    def nli_generate(req: schemas.GenerateRequest):
        return do_generate(req)

    @app.post("/v1/nli/subsample", response_model=schemas.ExamplesResponse)
    def nli_subsample(req: schemas.SubsampleRequest):
        return do_subsample(req)

    @app.post("/v1/relations/classify", response_model=schemas.PredictionsResponse)
    def relations_classify(req: schemas.ClassifyRequest):
        return do_classify(req)

    @app.post("/v1/relations/tune", response_model=schemas.TuneResponse)
    def relations_tune(req: schemas.TuneRequest):
        return do_tune(req)

    @app.post("/v1/relations/verb-matrix", response_model=schemas.MatrixResponse)
    def relations_verb_matrix(req: schemas.VerbMatrixRequest):
        return do_verb_matrix(req)

    @app.post("/v1/eval/entities", response_model=schemas.ReportResponse)
    def eval_entities(req: schemas.EvalEntitiesRequest):
        return do_eval_entities(req)

    @app.post("/v1/eval/relations", response_model=schemas.ReportResponse)
    def eval_relations(req: schemas.EvalRelationsRequest):
        return do_eval_relations(req)

    @app.post("/v1/eval/nli", response_model=schemas.ReportResponse)
    def eval_nli(req: schemas.EvalNliRequest):
        return do_eval_nli(req)

    @app.post("/v1/eval/curve", response_model=schemas.CurveResponse)
    def eval_curve(req: schemas.CurveRequest):
        return do_curve(req)

    return app


app = create_app()
