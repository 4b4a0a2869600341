"""Shared fixtures: a miniature checkpoint so the suite runs offline.

The checkpoint is a randomly initialised single-layer BERT classifier in
standard saved-model format. Its predictions are meaningless, which is
fine: these tests check the wire contract, not model quality. The label
table is deliberately scrambled (column 0 is neutral, not entailment) so
any code path that assumes a fixed class order fails loudly here.
"""

import os

os.environ.setdefault("HF_HUB_DISABLE_PROGRESS_BARS", "1")
os.environ.setdefault("TRANSFORMERS_VERBOSITY", "error")

import time

import pytest
import torch
from fastapi.testclient import TestClient
from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

from inference_sidecar.app import create_app
from inference_sidecar.config import ServerConfig

SCRAMBLED_ID2LABEL = {0: "neutral", 1: "entailment", 2: "contradiction"}

_WORDS = [
    "the", "a", "an", "and", "is", "of", "to", "be", "can", "will",
    "we", "him", "cervical", "spine", "seems", "undamaged", "collar",
    "removed", "safely", "sit", "on", "stretcher", "able", "explore",
    "keep", "full", "spinal", "immobilisation", "until", "imaging",
    "support", "attack", "patient", ".",
]


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny-nli")
    vocab_file = root / "vocab.txt"
    vocab_file.write_text(
        "\n".join(["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", *_WORDS]) + "\n",
        encoding="utf-8",
    )
    tokenizer = BertTokenizer(str(vocab_file), model_max_length=128)
    config = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=32,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
        num_labels=3,
        id2label=SCRAMBLED_ID2LABEL,
        label2id={name: index for index, name in SCRAMBLED_ID2LABEL.items()},
    )
    torch.manual_seed(0)
    model = BertForSequenceClassification(config)
    target = root / "model"
    model.save_pretrained(target)
    tokenizer.save_pretrained(target)
    return target


@pytest.fixture(scope="session")
def server_config(checkpoint):
    return ServerConfig(model=str(checkpoint), max_batch=16)


def wait_until_ready(client: TestClient, deadline_seconds: float = 30.0) -> None:
    deadline = time.monotonic() + deadline_seconds
    while time.monotonic() < deadline:
        if client.get("/healthz").status_code == 200:
            return
        time.sleep(0.05)
    raise TimeoutError("model did not become ready in time")


@pytest.fixture(scope="session")
def live_client(server_config):
    with TestClient(create_app(server_config)) as client:
        wait_until_ready(client)
        yield client
