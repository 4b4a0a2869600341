"""The HTTP surface: health reporting and batch scoring."""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServerConfig
from .model import NliModel


class ScoreRequest(BaseModel):
    premise: str
    hypotheses: list[str]


class ScoreTriple(BaseModel):
    entailment: float
    neutral: float
    contradiction: float


class ScoreResponse(BaseModel):
    scores: list[ScoreTriple]


@dataclass
class ModelHolder:
    """Load-state shared between the loader thread and request handlers.

    ``status`` moves idle -> loading -> ready, or to failed with ``error``
    set. Handlers only ever read it, so a plain attribute write from the
    loader thread is enough.
    """

    status: str = "idle"
    model: NliModel | None = None
    error: str | None = None


def _load_into(holder: ModelHolder, config: ServerConfig) -> None:
    try:
        loaded = NliModel.load(config.model, device=config.device)
    except Exception as exc:  # surfaced through /healthz, not a crash
        holder.error = f"{type(exc).__name__}: {exc}"
        holder.status = "failed"
        return
    holder.model = loaded
    holder.status = "ready"


def create_app(config: ServerConfig | None = None) -> FastAPI:
    """Build the application; the checkpoint loads after startup.

    Loading happens on a background thread so the server binds and answers
    health checks immediately, returning 503 until the model is ready.
    """
    settings = config if config is not None else ServerConfig.from_env()
    holder = ModelHolder()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        holder.status = "loading"
        loader = threading.Thread(
            target=_load_into, args=(holder, settings), daemon=True, name="model-loader"
        )
        loader.start()
        yield

    app = FastAPI(title="inference-sidecar", lifespan=lifespan)
    app.state.holder = holder
    app.state.config = settings

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        # The wire contract reports malformed bodies as 400, not FastAPI's
        # default 422.
        first = exc.errors()[0]
        location = ".".join(
            str(part) for part in first.get("loc", ()) if part != "body"
        )
        message = first.get("msg", "invalid request")
        detail = f"{location}: {message}" if location else message
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/healthz")
    def healthz():
        if holder.status == "ready":
            return {"status": "ok", "model": settings.model}
        if holder.status == "failed":
            detail = f"model failed to load: {holder.error}"
        elif holder.status == "loading":
            detail = "model is still loading"
        else:
            detail = "model not loaded"
        return JSONResponse(status_code=503, content={"detail": detail})

    @app.post("/v1/score", response_model=ScoreResponse)
    def score(request: ScoreRequest):
        if holder.status != "ready" or holder.model is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        if not request.hypotheses:
            raise HTTPException(status_code=400, detail="hypotheses must be non-empty")
        limit = settings.max_batch
        if len(request.hypotheses) > limit:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.hypotheses)} exceeds the limit of {limit}",
            )
        triples = holder.model.score(request.premise, request.hypotheses)
        return {"scores": triples}

    return app
