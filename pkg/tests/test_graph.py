import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import legal_assistant as la
from legal_assistant.errors import ArgumentError, MergeConflictError, UnknownNodeError
from legal_assistant.graph import (
    FACT,
    RULE,
    FactRuleGraph,
    FactRuleNode,
    match_known_nodes,
    merge,
    neighborhood,
)


def small_graph(facts, rules, edges, case_id="c0"):
    g = FactRuleGraph()
    for label in facts:
        node = FactRuleNode.make(label, FACT)
        g.nodes[node.id] = node
        g.provenance[node.id] = {case_id}
    for label in rules:
        node = FactRuleNode.make(label, RULE)
        g.nodes[node.id] = node
        g.provenance[node.id] = {case_id}
    g.edges = set(edges)
    return g.validate()


def test_node_id_is_normalized_label():
    node = FactRuleNode.make("  Breach   Notice ", FACT)
    assert node.id == "breach notice"
    with pytest.raises(ArgumentError):
        FactRuleNode(id="x", label="Y", kind=FACT)


def test_merge_idempotent():
    g = small_graph(["f1"], ["r1"], [("f1", "r1")])
    m = merge([g, g])
    assert m.nodes.keys() == g.nodes.keys()
    assert m.edges == g.edges
    assert m.provenance["f1"] == {"c0"}


def test_merge_empty_is_identity():
    m = merge([])
    assert m.nodes == {} and m.edges == set()


def test_merge_shared_rule_node_count():
    # three graphs sharing one rule node: merged size is the set union
    graphs = [
        small_graph([f"f{i}a", f"f{i}b"], ["shared rule"], [(f"f{i}a", "shared rule")], f"c{i}")
        for i in range(3)
    ]
    union = set()
    for g in graphs:
        union |= set(g.nodes)
    m = merge(graphs)
    assert len(m.nodes) == len(union) == sum(len(g.nodes) for g in graphs) - 2
    assert m.provenance["shared rule"] == {"c0", "c1", "c2"}


def test_merge_kind_conflict_names_cases():
    g1 = small_graph(["dual role"], [], [], "case-a")
    g2 = small_graph([], ["dual role"], [], "case-b")
    with pytest.raises(MergeConflictError) as exc:
        merge([g1, g2])
    assert "case-a" in str(exc.value) and "case-b" in str(exc.value)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_merge_order_invariant(seed):
    corpus = la.generate_synthetic_corpus(6, (2, 4), (1, 2), seed=seed % 1000)
    graphs = list(corpus.graphs)
    rng = random.Random(seed)
    shuffled = graphs[:]
    rng.shuffle(shuffled)
    a, b = merge(graphs), merge(shuffled)
    assert a.nodes == b.nodes
    assert a.edges == b.edges
    assert a.provenance == b.provenance


def test_bipartite_discipline_enforced():
    g = FactRuleGraph()
    for label, kind in [("f1", FACT), ("f2", FACT)]:
        node = FactRuleNode.make(label, kind)
        g.nodes[node.id] = node
    g.edges = {("f1", "f2")}
    with pytest.raises(ArgumentError):
        g.validate()


def test_neighborhood_k0_is_seeds_only():
    g = small_graph(["f1", "f2"], ["r1"], [("f1", "r1"), ("f2", "r1")])
    sub = neighborhood(g, {"f1"}, 0)
    assert set(sub.nodes) == {"f1"} and sub.edges == set()


def test_neighborhood_one_hop_path():
    g = small_graph(["f1", "f2"], ["r1"], [("f1", "r1"), ("f2", "r1")])
    sub = neighborhood(g, {"f1"}, 1)
    assert set(sub.nodes) == {"f1", "r1"}


def test_neighborhood_unknown_seed():
    g = small_graph(["f1"], [], [])
    with pytest.raises(UnknownNodeError):
        neighborhood(g, {"nope"}, 1)


def _bfs_oracle(g, seeds, k):
    # independent breadth-first search over an adjacency map
    adj = {i: set() for i in g.nodes}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    level = set(seeds)
    seen = set(seeds)
    for _ in range(k):
        level = {n for cur in level for n in adj[cur]} - seen
        seen |= level
    return seen


@pytest.mark.parametrize("seed", range(5))
def test_neighborhood_matches_bfs_oracle(seed):
    corpus = la.generate_synthetic_corpus(5, (2, 5), (1, 3), seed=seed)
    g = la.merge(corpus.graphs)
    rng = random.Random(seed)
    seeds = set(rng.sample(sorted(g.nodes), 2))
    sub = neighborhood(g, seeds, 2)
    assert set(sub.nodes) == _bfs_oracle(g, seeds, 2)


def test_match_exact_label_scores_one(merged10):
    node_id = merged10.fact_ids()[0]
    known = match_known_nodes(merged10, f"What about {node_id} here?", 0.8)
    assert node_id in known.ids
    assert known.match_scores[node_id] == 1.0


def test_match_no_shared_tokens_is_empty(merged10):
    known = match_known_nodes(merged10, "entirely unrelated wording", 0.8)
    assert known.ids == ()


def test_match_synthetic_question_exact_set(corpus10, merged10):
    # questions embed fact labels verbatim; the substring oracle is exact here
    for case in corpus10.cases[:5]:
        question = case.question.text
        expected = {i for i in merged10.fact_ids() if i in question}
        known = match_known_nodes(merged10, question, 0.8)
        assert set(known.ids) == expected == set(case.question.key_nodes)


@given(st.floats(0.1, 0.9), st.floats(0.1, 0.9))
@settings(max_examples=20, deadline=None)
def test_match_threshold_monotone(merged10, t1, t2):
    lo, hi = sorted([t1, t2])
    question = "What should be done given that " + ", ".join(merged10.fact_ids()[:3])
    at_hi = set(match_known_nodes(merged10, question, hi).ids)
    at_lo = set(match_known_nodes(merged10, question, lo).ids)
    assert at_hi <= at_lo


def test_graph_json_round_trip(merged10):
    restored = FactRuleGraph.from_json(merged10.to_json())
    assert restored.nodes == merged10.nodes
    assert restored.edges == merged10.edges
    assert restored.provenance == merged10.provenance
