"""Per-document argument graphs and neutral-pair selection strategies.

Nodes are entity spans (identified by their decode ordinal), edges are the
annotated relations among surviving spans. Four strategies pick which
unannotated entity-to-MajorClaim pairs count as neutral:

  v1  every unannotated pair
  v2  endpoints in different connected components (undirected view)
  v3  the source entity heads no annotated relation at all
  v4  at least one endpoint is fully isolated (degree zero)

By construction v4 is a subset of v2 is a subset of v1, and v3 is a subset
of v1.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from argmine.corpus.model import (
    MAJOR_CLAIM,
    Document,
    EntitySpan,
    RelationAnnotation,
)

log = logging.getLogger(__name__)

V1 = "v1"
V2 = "v2"
V3 = "v3"
V4 = "v4"
STRATEGIES = (V1, V2, V3, V4)

# Kind prefixes for DOT node labels.
_LABEL_PREFIX = {"premise": "P", "claim": "C", MAJOR_CLAIM: "MC"}


@dataclass(frozen=True)
class ArgumentGraph:
    """Immutable relation graph of one document.

    Node identity is the span's ordinal in the document's decode order, so
    ordinals stay stable across boilerplate filtering (filtered spans simply
    disappear from ``nodes``). Edges that referenced a filtered span are kept
    aside in ``dropped_edges`` instead of failing the build.
    """

    doc_id: str
    nodes: tuple[EntitySpan, ...]
    edges: tuple[RelationAnnotation, ...]
    dropped_edges: tuple[RelationAnnotation, ...] = ()
    _by_ordinal: dict[int, EntitySpan] = field(
        init=False, repr=False, compare=False, hash=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        self._by_ordinal.update({s.ordinal: s for s in self.nodes})

    def span(self, ordinal: int) -> EntitySpan:
        return self._by_ordinal[ordinal]

    def has_node(self, ordinal: int) -> bool:
        return ordinal in self._by_ordinal

    def major_claims(self) -> list[int]:
        return [s.ordinal for s in self.nodes if s.kind == MAJOR_CLAIM]

    def non_major_claims(self) -> list[int]:
        return [s.ordinal for s in self.nodes if s.kind != MAJOR_CLAIM]


def build_graph(doc: Document, spans: Sequence[EntitySpan] | None = None) -> ArgumentGraph:
    """Assemble the graph over ``spans`` (default: every span of the doc).

    Callers that want boilerplate removal pass ``filter_boilerplate(doc)``.
    Relations touching an absent span are dropped with a warning, not an
    error: filtering is expected to orphan some edges.
    """
    if spans is None:
        spans = doc.spans
    present = {s.ordinal for s in spans}
    kept = []
    dropped = []
    for rel in doc.relations:
        if rel.src in present and rel.dst in present:
            kept.append(rel)
        else:
            dropped.append(rel)
            log.warning(
                "dangling edge dropped: %s %d->%d (%s)", doc.id, rel.src, rel.dst, rel.rel
            )
    return ArgumentGraph(
        doc_id=doc.id,
        nodes=tuple(sorted(spans, key=lambda s: s.ordinal)),
        edges=tuple(kept),
        dropped_edges=tuple(dropped),
    )


def connected_components(graph: ArgumentGraph) -> list[list[int]]:
    """Undirected connected components, each sorted, ordered by smallest member."""
    adjacency: dict[int, set[int]] = {s.ordinal: set() for s in graph.nodes}
    for edge in graph.edges:
        adjacency[edge.src].add(edge.dst)
        adjacency[edge.dst].add(edge.src)

    seen: set[int] = set()
    components = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack = [start]
        members = []
        seen.add(start)
        while stack:
            node = stack.pop()
            members.append(node)
            for neighbor in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    stack.append(neighbor)
        components.append(sorted(members))
    return components


def all_pairs(graph: ArgumentGraph) -> list[tuple[int, int]]:
    """Every (entity, MajorClaim) pair, annotated or not, ordered by ordinals."""
    targets = graph.major_claims()
    return [(x, y) for x in graph.non_major_claims() for y in targets]


def candidate_pairs(graph: ArgumentGraph) -> list[tuple[int, int]]:
    """Unannotated (entity, MajorClaim) pairs, ordered by (x ordinal, y ordinal)."""
    annotated = {(e.src, e.dst) for e in graph.edges}
    return [(x, y) for x, y in all_pairs(graph) if (x, y) not in annotated]


def neutral_pairs(graph: ArgumentGraph, strategy: str) -> list[tuple[int, int]]:
    """Neutral candidates under one of the four strategies.

    Each strategy filters the candidate set, which makes the inclusion
    relations between strategies hold by construction.
    """
    candidates = candidate_pairs(graph)
    if strategy == V1:
        return candidates
    if strategy == V2:
        component_of = {}
        for i, members in enumerate(connected_components(graph)):
            for node in members:
                component_of[node] = i
        return [(x, y) for x, y in candidates if component_of[x] != component_of[y]]
    if strategy == V3:
        sources = {e.src for e in graph.edges}
        return [(x, y) for x, y in candidates if x not in sources]
    if strategy == V4:
        degree: dict[int, int] = {s.ordinal: 0 for s in graph.nodes}
        for e in graph.edges:
            degree[e.src] += 1
            degree[e.dst] += 1
        return [(x, y) for x, y in candidates if degree[x] == 0 or degree[y] == 0]
    raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")


def gold_label(graph: ArgumentGraph, x: int, y: int) -> str | None:
    """The annotated relation kind for x->y, or None when unannotated."""
    for edge in graph.edges:
        if edge.src == x and edge.dst == y:
            return edge.rel
    return None


def node_labels(graph: ArgumentGraph) -> dict[int, str]:
    """Human-readable per-kind labels (P1, C2, MC1...) in ordinal order."""
    counters = {prefix: 0 for prefix in _LABEL_PREFIX.values()}
    labels = {}
    for span in graph.nodes:
        prefix = _LABEL_PREFIX[span.kind]
        counters[prefix] += 1
        labels[span.ordinal] = f"{prefix}{counters[prefix]}"
    return labels


def to_dot(graph: ArgumentGraph) -> str:
    """DOT rendering for inspection; edges labeled with their relation kind."""
    labels = node_labels(graph)
    doc_id = graph.doc_id.replace('"', '\\"')
    lines = [f'digraph "{doc_id}" {{']
    for span in graph.nodes:
        lines.append(f'  n{span.ordinal} [label="{labels[span.ordinal]}"];')
    for edge in graph.edges:
        lines.append(f'  n{edge.src} -> n{edge.dst} [label="{edge.rel}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
