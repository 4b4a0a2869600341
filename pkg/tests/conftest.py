import json
from pathlib import Path

import pytest

from argmine.corpus.io import parse_corpus
from argmine.corpus.ops import filter_boilerplate
from argmine.graph import build_graph
from argmine.scoring import load_fixture

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def manifest():
    return json.loads((DATA / "manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def corpus():
    return parse_corpus(DATA / "synthetic_corpus.jsonl")


@pytest.fixture(scope="session")
def corpus_path():
    return DATA / "synthetic_corpus.jsonl"


@pytest.fixture(scope="session")
def fixture_scorer():
    return load_fixture(DATA / "scorer_fixture.jsonl")


@pytest.fixture(scope="session")
def fixture_path():
    return DATA / "scorer_fixture.jsonl"


@pytest.fixture(scope="session")
def docs_by_id(corpus):
    return {doc.id: doc for doc in corpus}


@pytest.fixture(scope="session")
def g5_doc(docs_by_id):
    return docs_by_id["g5"]


@pytest.fixture()
def g5_graph(g5_doc):
    return build_graph(g5_doc, spans=filter_boilerplate(g5_doc))


@pytest.fixture()
def graphs(corpus):
    return {doc.id: build_graph(doc, spans=filter_boilerplate(doc)) for doc in corpus}
