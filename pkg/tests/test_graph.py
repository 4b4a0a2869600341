import random
import time

import pytest

from argmine.corpus.model import RelationAnnotation
from argmine.graph import (
    STRATEGIES,
    ArgumentGraph,
    all_pairs,
    build_graph,
    candidate_pairs,
    connected_components,
    gold_label,
    neutral_pairs,
    node_labels,
    to_dot,
)

from .oracles import component_partition, neutral_set, random_graph

# --- the hand-designed g5 graph -------------------------------------------


def test_g5_shape(g5_graph, manifest):
    assert len(g5_graph.nodes) == manifest["g5"]["nodes"]
    assert len(g5_graph.edges) == manifest["g5"]["edges"]


def test_g5_components(g5_graph, manifest):
    got = [sorted(c) for c in connected_components(g5_graph)]
    assert got == manifest["g5"]["components"]


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_g5_neutral_pairs_exact(g5_graph, manifest, strategy):
    got = [list(p) for p in neutral_pairs(g5_graph, strategy)]
    assert got == manifest["g5"][strategy]


def test_g5_candidates_are_v1(g5_graph, manifest):
    assert [list(p) for p in candidate_pairs(g5_graph)] == manifest["g5"]["v1"]


def test_g5_labels(g5_graph):
    labels = node_labels(g5_graph)
    assert labels == {0: "P1", 1: "P2", 2: "P3", 3: "C1", 4: "C2", 5: "MC1", 6: "MC2"}


def test_g5_gold_labels(g5_graph):
    assert gold_label(g5_graph, 3, 6) == "support"
    assert gold_label(g5_graph, 2, 3) == "attack"
    assert gold_label(g5_graph, 0, 5) is None
    assert gold_label(g5_graph, 6, 3) is None  # direction matters


def test_g5_dot_rendering(g5_graph):
    dot = to_dot(g5_graph)
    assert dot.startswith('digraph "g5" {')
    assert dot.endswith("}\n")
    assert '  n5 [label="MC1"];' in dot
    assert '  n3 -> n6 [label="support"];' in dot
    assert '  n2 -> n3 [label="attack"];' in dot
    assert dot.count(" -> ") == 4


# --- construction ----------------------------------------------------------


def test_build_graph_drops_dangling_edges(docs_by_id, manifest, caplog):
    from argmine.corpus.ops import filter_boilerplate

    doc = docs_by_id["d04"]
    with caplog.at_level("WARNING"):
        graph = build_graph(doc, spans=filter_boilerplate(doc))
    dropped = sorted((e.src, e.dst) for e in graph.dropped_edges)
    assert dropped == [tuple(p) for p in manifest["d04_filtered"]["dropped_edges"]]
    assert [[e.src, e.dst, e.rel] for e in graph.edges] == manifest["d04_filtered"]["kept_edges"]
    assert any("dangling" in r.message for r in caplog.records)


def test_build_graph_without_filter_keeps_everything(docs_by_id):
    doc = docs_by_id["d04"]
    graph = build_graph(doc)
    assert len(graph.nodes) == len(doc.spans)
    assert len(graph.edges) == len(doc.relations)
    assert graph.dropped_edges == ()


def test_nodes_keep_original_ordinals(docs_by_id):
    from argmine.corpus.ops import filter_boilerplate

    doc = docs_by_id["d04"]
    graph = build_graph(doc, spans=filter_boilerplate(doc))
    assert sorted(n.ordinal for n in graph.nodes) == [0, 1, 3]
    assert graph.has_node(3)
    assert not graph.has_node(2)


def test_all_pairs_excludes_major_claim_sources(g5_graph):
    pairs = all_pairs(g5_graph)
    assert len(pairs) == 10
    assert all(g5_graph.span(x).kind != "major_claim" for x, _ in pairs)
    assert all(g5_graph.span(y).kind == "major_claim" for _, y in pairs)


def test_neutral_rejects_unknown_strategy(g5_graph):
    with pytest.raises(ValueError, match="strategy"):
        neutral_pairs(g5_graph, "v5")


# --- whole corpus against the manifest --------------------------------------


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_corpus_neutral_counts(graphs, manifest, strategy):
    for doc_id, graph in graphs.items():
        if doc_id == "d05":
            continue
        expected = manifest["neutral_pairs_by_doc"][strategy][doc_id]
        assert len(neutral_pairs(graph, strategy)) == expected, doc_id


# --- oracle equivalence on random graphs ------------------------------------


def test_strategies_match_brute_force_oracle_on_200_random_graphs():
    rng = random.Random(0xA5)
    start = time.perf_counter()
    for i in range(200):
        graph = random_graph(rng)
        for strategy in STRATEGIES:
            got = set(neutral_pairs(graph, strategy))
            want = neutral_set(graph, strategy)
            assert got == want, (i, strategy, graph)
    assert time.perf_counter() - start < 5.0


def test_inclusion_lattice_on_random_graphs():
    rng = random.Random(0xBEEF)
    for _ in range(200):
        graph = random_graph(rng)
        v1 = set(neutral_pairs(graph, "v1"))
        v2 = set(neutral_pairs(graph, "v2"))
        v3 = set(neutral_pairs(graph, "v3"))
        v4 = set(neutral_pairs(graph, "v4"))
        assert v4 <= v2 <= v1
        assert v3 <= v1


def test_components_match_oracle_on_random_graphs():
    rng = random.Random(0xFACE)
    for _ in range(100):
        graph = random_graph(rng)
        got = {frozenset(c) for c in connected_components(graph)}
        assert got == component_partition(graph)


def test_neutral_pairs_are_ordered_deterministically():
    rng = random.Random(3)
    for _ in range(50):
        graph = random_graph(rng)
        for strategy in STRATEGIES:
            pairs = neutral_pairs(graph, strategy)
            assert pairs == sorted(pairs)


def test_isolated_node_graph():
    from argmine.corpus.model import EntitySpan

    nodes = (
        EntitySpan(ordinal=0, kind="premise", token_start=0, token_end=0, section=0),
        EntitySpan(ordinal=1, kind="major_claim", token_start=1, token_end=1, section=1),
    )
    graph = ArgumentGraph(doc_id="iso", nodes=nodes, edges=())
    assert neutral_pairs(graph, "v1") == [(0, 1)]
    assert neutral_pairs(graph, "v2") == [(0, 1)]
    assert neutral_pairs(graph, "v3") == [(0, 1)]
    assert neutral_pairs(graph, "v4") == [(0, 1)]
    assert [sorted(c) for c in connected_components(graph)] == [[0], [1]]


def test_fully_annotated_graph_has_no_neutrals():
    from argmine.corpus.model import EntitySpan

    nodes = (
        EntitySpan(ordinal=0, kind="premise", token_start=0, token_end=0, section=0),
        EntitySpan(ordinal=1, kind="major_claim", token_start=1, token_end=1, section=1),
    )
    edges = (RelationAnnotation(src=0, dst=1, rel="support"),)
    graph = ArgumentGraph(doc_id="full", nodes=nodes, edges=edges)
    for strategy in STRATEGIES:
        assert neutral_pairs(graph, strategy) == []
