"""Command line entry point: ``python -m inference_sidecar``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import uvicorn

from .app import create_app
from .config import DEFAULT_MODEL, ServerConfig


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inference-sidecar",
        description="Serve entailment scores for premise/hypothesis batches.",
    )
    parser.add_argument(
        "--model",
        help=f"checkpoint to serve (default: SIDECAR_MODEL or {DEFAULT_MODEL})",
    )
    parser.add_argument("--host", help="bind address (default: SIDECAR_HOST or 127.0.0.1)")
    parser.add_argument("--port", type=int, help="bind port (default: SIDECAR_PORT or 8100)")
    parser.add_argument(
        "--max-batch",
        type=int,
        dest="max_batch",
        help="largest accepted hypothesis batch (default: SIDECAR_MAX_BATCH or 16)",
    )
    parser.add_argument("--device", help="torch device (default: SIDECAR_DEVICE or cpu)")
    return parser


def main(argv: list[str] | None = None) -> int:
    arguments = build_parser().parse_args(argv)
    overrides = {name: value for name, value in vars(arguments).items() if value is not None}
    try:
        settings = replace(ServerConfig.from_env(), **overrides)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
