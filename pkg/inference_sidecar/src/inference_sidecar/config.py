"""Runtime settings for the scoring server."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping

DEFAULT_MODEL = "roberta-large-mnli"

_ENV_FIELDS = (
    ("SIDECAR_MODEL", "model", str),
    ("SIDECAR_HOST", "host", str),
    ("SIDECAR_PORT", "port", int),
    ("SIDECAR_MAX_BATCH", "max_batch", int),
    ("SIDECAR_DEVICE", "device", str),
)


@dataclass(frozen=True)
class ServerConfig:
    """Everything the server needs to know before it starts.

    ``model`` is anything ``transformers`` can load: a hub identifier or a
    local checkpoint directory.
    """

    model: str = DEFAULT_MODEL
    host: str = "127.0.0.1"
    port: int = 8100
    max_batch: int = 16
    device: str = "cpu"

    def __post_init__(self) -> None:
        if self.max_batch < 1:
            raise ValueError("max_batch must be at least 1")
        if not 0 < self.port < 65536:
            raise ValueError("port must be in 1..65535")

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "ServerConfig":
        """Build a config from ``SIDECAR_*`` variables, defaulting the rest."""
        source = os.environ if env is None else env
        kwargs: dict[str, object] = {}
        for variable, field, convert in _ENV_FIELDS:
            if variable in source:
                try:
                    kwargs[field] = convert(source[variable])
                except ValueError:
                    raise ValueError(
                        f"{variable} must be a valid {field} value, "
                        f"got {source[variable]!r}"
                    ) from None
        return cls(**kwargs)
