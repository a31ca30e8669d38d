"""Merged fact-rule graph: storage, merging, neighborhood queries, and known-node matching.

Nodes are typed fact or rule; edges are undirected fact-rule links. The merged
graph is immutable after construction: every operation returns a new graph.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

from .errors import ArgumentError, MergeConflictError, UnknownNodeError
from .text import normalize, tokens

FACT = "fact"
RULE = "rule"


@dataclass(frozen=True)
class FactRuleNode:
    id: str
    label: str
    kind: str  # fact | rule
    aliases: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.kind not in (FACT, RULE):
            raise ArgumentError(f"unknown node kind {self.kind!r}")
        if self.id != normalize(self.label):
            raise ArgumentError(
                f"node id {self.id!r} is not the normalization of label {self.label!r}"
            )

    @staticmethod
    def make(label: str, kind: str, aliases=()) -> "FactRuleNode":
        return FactRuleNode(
            id=normalize(label),
            label=label,
            kind=kind,
            aliases=frozenset(aliases) | {label},
        )


@dataclass
class FactRuleGraph:
    """Bipartite fact-rule graph; edges stored as (fact_id, rule_id) pairs."""

    nodes: dict[str, FactRuleNode] = field(default_factory=dict)
    edges: set[tuple[str, str]] = field(default_factory=set)
    provenance: dict[str, set[str]] = field(default_factory=dict)

    def validate(self):
        for fact_id, rule_id in self.edges:
            if fact_id not in self.nodes or rule_id not in self.nodes:
                raise ArgumentError(f"edge ({fact_id}, {rule_id}) references a missing node")
            if self.nodes[fact_id].kind != FACT or self.nodes[rule_id].kind != RULE:
                raise ArgumentError(
                    f"edge ({fact_id}, {rule_id}) must connect a fact to a rule"
                )
        return self

    def fact_ids(self) -> list[str]:
        return sorted(i for i, n in self.nodes.items() if n.kind == FACT)

    def rule_ids(self) -> list[str]:
        return sorted(i for i, n in self.nodes.items() if n.kind == RULE)

    def neighbors(self, node_id: str) -> set[str]:
        if node_id not in self.nodes:
            raise UnknownNodeError(node_id)
        out = set()
        for a, b in self.edges:
            if a == node_id:
                out.add(b)
            elif b == node_id:
                out.add(a)
        return out

    def to_json(self) -> str:
        payload = {
            "nodes": [
                {
                    "id": n.id,
                    "label": n.label,
                    "kind": n.kind,
                    "aliases": sorted(n.aliases),
                    "provenance": sorted(self.provenance.get(n.id, set())),
                }
                for n in sorted(self.nodes.values(), key=lambda n: n.id)
            ],
            "edges": sorted([f, r] for f, r in self.edges),
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "FactRuleGraph":
        payload = json.loads(text)
        g = FactRuleGraph()
        for item in payload["nodes"]:
            node = FactRuleNode(
                id=item["id"],
                label=item["label"],
                kind=item["kind"],
                aliases=frozenset(item["aliases"]),
            )
            g.nodes[node.id] = node
            g.provenance[node.id] = set(item.get("provenance", []))
        g.edges = {(f, r) for f, r in payload["edges"]}
        return g.validate()


@dataclass(frozen=True)
class KnownNodeSet:
    """Nodes of the merged graph matched against a question, with match confidence."""

    ids: tuple[str, ...]
    match_scores: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.ids)) != len(self.ids):
            raise ArgumentError("duplicate ids in KnownNodeSet")

    def as_set(self) -> frozenset[str]:
        return frozenset(self.ids)

    @staticmethod
    def of(ids) -> "KnownNodeSet":
        ordered = tuple(sorted(set(ids)))
        return KnownNodeSet(ids=ordered, match_scores={i: 1.0 for i in ordered})


def merge(graphs: list[FactRuleGraph]) -> FactRuleGraph:
    """Union per-case graphs by canonical node id; order-independent."""
    merged = FactRuleGraph()
    for g in graphs:
        for node_id, node in g.nodes.items():
            existing = merged.nodes.get(node_id)
            if existing is None:
                merged.nodes[node_id] = node
                merged.provenance[node_id] = set(g.provenance.get(node_id, set()))
            else:
                if existing.kind != node.kind:
                    raise MergeConflictError(
                        f"node {node_id!r} is a {existing.kind} in cases "
                        f"{sorted(merged.provenance[node_id])} but a {node.kind} in cases "
                        f"{sorted(g.provenance.get(node_id, set()))}"
                    )
                merged.nodes[node_id] = FactRuleNode(
                    id=node_id,
                    label=existing.label,
                    kind=existing.kind,
                    aliases=existing.aliases | node.aliases,
                )
                merged.provenance[node_id] |= g.provenance.get(node_id, set())
        merged.edges |= g.edges
    return merged.validate()


def neighborhood(g: FactRuleGraph, seeds, k: int) -> FactRuleGraph:
    """Induced subgraph of all nodes within k hops of any seed; k=0 keeps seeds only."""
    seeds = set(seeds)
    for s in seeds:
        if s not in g.nodes:
            raise UnknownNodeError(s)
    if k < 0:
        raise ArgumentError("k must be >= 0")
    adjacency: dict[str, set[str]] = {i: set() for i in g.nodes}
    for a, b in g.edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    reached = set(seeds)
    frontier = deque((s, 0) for s in sorted(seeds))
    while frontier:
        node, depth = frontier.popleft()
        if depth == k:
            continue
        for nb in adjacency[node]:
            if nb not in reached:
                reached.add(nb)
                frontier.append((nb, depth + 1))
    sub = FactRuleGraph(
        nodes={i: g.nodes[i] for i in reached},
        edges={(a, b) for a, b in g.edges if a in reached and b in reached},
        provenance={i: set(g.provenance.get(i, set())) for i in reached},
    )
    return sub.validate()


def alias_coverage(node: FactRuleNode, question_tokens: frozenset[str]) -> float:
    """Best coverage over aliases: fraction of an alias's tokens present in the question."""
    best = 0.0
    for alias in sorted(node.aliases):
        alias_tokens = tokens(alias)
        if not alias_tokens:
            continue
        score = len(alias_tokens & question_tokens) / len(alias_tokens)
        best = max(best, score)
    return best


def match_known_nodes(g: FactRuleGraph, question: str, threshold: float = 0.8) -> KnownNodeSet:
    """Deterministic token-overlap matcher: a node is known when some alias's tokens
    are covered by the question at or above the threshold."""
    if not g.nodes:
        raise ArgumentError("cannot match against an empty graph")
    q_tokens = tokens(question)
    scored = []
    for node_id in sorted(g.nodes):
        score = alias_coverage(g.nodes[node_id], q_tokens)
        if score >= threshold:
            scored.append((node_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return KnownNodeSet(
        ids=tuple(node_id for node_id, _ in scored),
        match_scores={node_id: score for node_id, score in scored},
    )
