import random

import numpy as np
import pytest

import legal_assistant as la
from legal_assistant.encoder import (
    EncoderParams,
    State,
    encode_nodes,
    initial_feature,
    state_of,
)
from legal_assistant.errors import ConfigError, MissingEmbeddingError
from legal_assistant.graph import FACT, RULE, FactRuleGraph, FactRuleNode, KnownNodeSet


@pytest.fixture(scope="module")
def params():
    return EncoderParams.init(32, seed=0)


def test_initial_feature_unit_norm():
    vec = initial_feature("breach of notice", 32)
    assert np.isclose(np.linalg.norm(vec), 1.0)


def test_initial_feature_empty_label_is_zero():
    assert np.allclose(initial_feature("", 32), 0.0)


def test_initial_feature_deterministic_across_dims():
    for dim in (8, 64, 256):
        a = initial_feature("same label", dim)
        b = initial_feature("same label", dim)
        assert np.array_equal(a, b)


def test_params_check_rejects_bad_shapes():
    p = EncoderParams.init(8, seed=0)
    p.w_self[0] = np.zeros((8, 9))
    with pytest.raises(ConfigError):
        p.check()
    with pytest.raises(ConfigError):
        EncoderParams(dim=8, w_self=[np.zeros((8, 8))], w_neigh=[], bias=[]).check()


def _graph(facts, rules, edges):
    g = FactRuleGraph()
    for label in facts:
        node = FactRuleNode.make(label, FACT)
        g.nodes[node.id] = node
    for label in rules:
        node = FactRuleNode.make(label, RULE)
        g.nodes[node.id] = node
    g.edges = set(edges)
    return g.validate()


def test_encode_isolated_node_matches_manual_rounds(params):
    # a node without neighbors sees a zero neighbor mean both rounds
    g = _graph(["solo fact"], [], [])
    out = encode_nodes(g, params)
    h = initial_feature("solo fact", params.dim)
    for ws, wn, b in zip(params.w_self, params.w_neigh, params.bias):
        h = np.tanh(h @ ws.T + np.zeros(params.dim) @ wn.T + b)
    assert np.allclose(out["solo fact"], h)


def test_encode_pair_matches_manual_rounds(params):
    g = _graph(["f1"], ["r1"], [("f1", "r1")])
    out = encode_nodes(g, params)
    hf = initial_feature("f1", params.dim)
    hr = initial_feature("r1", params.dim)
    for ws, wn, b in zip(params.w_self, params.w_neigh, params.bias):
        nf = np.tanh(hf @ ws.T + hr @ wn.T + b)
        nr = np.tanh(hr @ ws.T + hf @ wn.T + b)
        hf, hr = nf, nr
    assert np.allclose(out["f1"], hf)
    assert np.allclose(out["r1"], hr)


def test_encode_insertion_order_invariant(params):
    # same node and edge sets added in a different order embed identically
    g1 = _graph(["f1", "f2"], ["r1"], [("f1", "r1"), ("f2", "r1")])
    g2 = FactRuleGraph()
    for label, kind in [("r1", RULE), ("f2", FACT), ("f1", FACT)]:
        node = FactRuleNode.make(label, kind)
        g2.nodes[node.id] = node
    g2.edges = {("f2", "r1"), ("f1", "r1")}
    g2.validate()
    out1, out2 = encode_nodes(g1, params), encode_nodes(g2, params)
    assert out1.keys() == out2.keys()
    for node_id in out1:
        assert np.array_equal(out1[node_id], out2[node_id])


def test_encode_focus_restricts_message_flow(params):
    # messages do not cross the neighborhood boundary, so embeddings inside a
    # focused subgraph differ from the whole-graph ones when context is cut off
    corpus = la.generate_synthetic_corpus(4, (3, 4), (2, 2), seed=8)
    g = la.merge(corpus.graphs)
    focus_id = sorted(g.fact_ids())[0]
    focused = encode_nodes(g, params, focus=KnownNodeSet.of([focus_id]), k=1)
    whole = encode_nodes(g, params)
    assert focus_id in focused
    assert set(focused) < set(whole)


def test_encode_empty_graph(params):
    assert encode_nodes(FactRuleGraph(), params) == {}


def test_state_of_empty_known_is_zero(params):
    state = state_of(KnownNodeSet.of([]), {}, params.dim)
    assert np.allclose(state.pooled, 0.0)


def test_state_of_is_mean(params):
    g = _graph(["f1", "f2"], ["r1"], [("f1", "r1"), ("f2", "r1")])
    emb = encode_nodes(g, params)
    state = state_of(KnownNodeSet.of(["f1", "f2"]), emb, params.dim)
    assert np.allclose(state.pooled, (emb["f1"] + emb["f2"]) / 2.0)


def test_state_of_missing_embedding(params):
    with pytest.raises(MissingEmbeddingError):
        state_of(KnownNodeSet.of(["ghost"]), {}, params.dim)


def test_encode_deterministic_over_merged_corpora(params):
    corpus = la.generate_synthetic_corpus(6, (2, 5), (1, 3), seed=2)
    g = la.merge(corpus.graphs)
    a, b = encode_nodes(g, params), encode_nodes(g, params)
    for node_id in a:
        assert np.array_equal(a[node_id], b[node_id])


def test_encode_values_bounded(params):
    corpus = la.generate_synthetic_corpus(3, (2, 4), (1, 2), seed=3)
    g = la.merge(corpus.graphs)
    for vec in encode_nodes(g, params).values():
        assert np.all(np.abs(vec) <= 1.0)  # tanh output range
