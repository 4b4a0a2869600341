"""Backends the CLI talks through: in-process calls or a remote service.

Both backends speak the same request/response payloads, so every CLI
subcommand behaves identically with and without a server; the local backend
simply skips HTTP and calls the service handlers as functions.
"""

from __future__ import annotations

import httpx
from pydantic import ValidationError

from argmine.errors import ArgmineError, ProtocolError, SchemaError, TransportError
from argmine.service import schemas
from argmine.service.app import (
    do_classify,
    do_curve,
    do_eval_entities,
    do_eval_nli,
    do_eval_relations,
    do_filter_sections,
    do_generate,
    do_graph_dot,
    do_split,
    do_stats,
    do_subsample,
    do_tune,
    do_validate,
    do_verb_matrix,
)

_ROUTES = {
    "/v1/corpus/validate": (do_validate, schemas.DocumentsRequest),
    "/v1/corpus/stats": (do_stats, schemas.DocumentsRequest),
    "/v1/corpus/split": (do_split, schemas.SplitRequest),
    "/v1/corpus/filter-sections": (do_filter_sections, schemas.FilterSectionsRequest),
    "/v1/corpus/graph-dot": (do_graph_dot, schemas.GraphDotRequest),
    "/v1/nli/generate": (do_generate, schemas.GenerateRequest),
    "/v1/nli/subsample": (do_subsample, schemas.SubsampleRequest),
    "/v1/relations/classify": (do_classify, schemas.ClassifyRequest),
    "/v1/relations/tune": (do_tune, schemas.TuneRequest),
    "/v1/relations/verb-matrix": (do_verb_matrix, schemas.VerbMatrixRequest),
    "/v1/eval/entities": (do_eval_entities, schemas.EvalEntitiesRequest),
    "/v1/eval/relations": (do_eval_relations, schemas.EvalRelationsRequest),
    "/v1/eval/nli": (do_eval_nli, schemas.EvalNliRequest),
    "/v1/eval/curve": (do_curve, schemas.CurveRequest),
}


class LocalBackend:
    """Run handlers in-process; domain errors propagate unchanged."""

    def call(self, path: str, payload: dict) -> dict:
        handler, request_model = _ROUTES[path]
        try:
            request = request_model(**payload)
        except ValidationError as exc:
            raise SchemaError(f"invalid request for {path}: {exc}") from exc
        return handler(request).model_dump()


class HttpBackend:
    """POST payloads to a running service; HTTP failures become the same
    error types the local backend raises."""

    def __init__(
        self,
        base_url: str = "",
        client: httpx.Client | None = None,
        timeout: float = 600.0,
    ):
        if client is not None:
            self._client = client  # injected clients carry their own base_url
        else:
            self._client = httpx.Client(base_url=base_url, timeout=timeout)

    def close(self) -> None:
        self._client.close()

    def call(self, path: str, payload: dict) -> dict:
        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise TransportError(f"service request failed: {exc}") from exc
        if response.status_code == 400:
            raise ArgmineError(_detail(response))
        if response.status_code == 422:
            raise SchemaError(f"service rejected the request: {_detail(response)}")
        if response.status_code != 200:
            raise ProtocolError(
                f"service returned HTTP {response.status_code}: {response.text[:200]}"
            )
        return response.json()


def _detail(response: httpx.Response) -> str:
    try:
        body = response.json()
    except ValueError:
        return response.text[:200]
    detail = body.get("detail") if isinstance(body, dict) else None
    return detail if isinstance(detail, str) else str(detail)
