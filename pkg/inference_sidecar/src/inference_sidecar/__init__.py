"""Model-serving process for premise/hypothesis entailment scoring.

The package wraps a pre-trained NLI sequence classifier behind the small
HTTP contract described in ``protocol/PROTOCOL.md`` at the repository
root: ``POST /v1/score`` turns one premise and a batch of hypotheses into
order-aligned probability triples, and ``GET /healthz`` reports whether
the checkpoint has finished loading.
"""

from .app import create_app
from .config import DEFAULT_MODEL, ServerConfig
from .model import NliModel

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MODEL",
    "NliModel",
    "ServerConfig",
    "__version__",
    "create_app",
]
