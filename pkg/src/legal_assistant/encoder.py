"""Node encoder: hashed-token initial features plus two rounds of mean-aggregation
message passing. Deterministic given parameters; no training framework involved."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, MissingEmbeddingError
from .graph import FactRuleGraph, KnownNodeSet, neighborhood
from .text import token_list

N_ROUNDS = 2


@dataclass
class EncoderParams:
    dim: int
    w_self: list[np.ndarray]   # per round, (dim, dim)
    w_neigh: list[np.ndarray]  # per round, (dim, dim)
    bias: list[np.ndarray]     # per round, (dim,)

    def check(self):
        if len(self.w_self) != N_ROUNDS:
            raise ConfigError(f"encoder must have {N_ROUNDS} rounds")
        for ws, wn, b in zip(self.w_self, self.w_neigh, self.bias):
            if ws.shape != (self.dim, self.dim) or wn.shape != (self.dim, self.dim):
                raise ConfigError("encoder weight shape mismatch")
            if b.shape != (self.dim,):
                raise ConfigError("encoder bias shape mismatch")
        return self

    @staticmethod
    def init(dim: int, seed: int) -> "EncoderParams":
        rng = np.random.default_rng(seed)
        scale = 1.0 / np.sqrt(dim)
        return EncoderParams(
            dim=dim,
            w_self=[rng.normal(0.0, scale, (dim, dim)) for _ in range(N_ROUNDS)],
            w_neigh=[rng.normal(0.0, scale, (dim, dim)) for _ in range(N_ROUNDS)],
            bias=[np.zeros(dim) for _ in range(N_ROUNDS)],
        ).check()


def initial_feature(label: str, dim: int) -> np.ndarray:
    """Hashing-trick feature: each token of the label lands on a signed coordinate.

    Stable across processes (no PYTHONHASHSEED dependence).
    """
    vec = np.zeros(dim)
    for token in token_list(label):
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
        value = int.from_bytes(digest, "big")
        index = value % dim
        sign = 1.0 if (value >> 32) % 2 == 0 else -1.0
        vec[index] += sign
    norm = np.linalg.norm(vec)
    return vec / norm if norm > 0 else vec


def encode_nodes(
    g: FactRuleGraph,
    params: EncoderParams,
    focus: KnownNodeSet | None = None,
    k: int = 2,
) -> dict[str, np.ndarray]:
    """Embed every node within k hops of the focus set (the whole graph when the
    focus is empty). Messages only flow inside the induced subgraph."""
    params.check()
    sub = g if (focus is None or not focus.ids) else neighborhood(g, focus.ids, k)
    ids = sorted(sub.nodes)
    if not ids:
        return {}
    index = {node_id: i for i, node_id in enumerate(ids)}
    n = len(ids)
    h = np.stack([initial_feature(sub.nodes[i].label, params.dim) for i in ids])
    adj = np.zeros((n, n))
    for a, b in sub.edges:
        adj[index[a], index[b]] = 1.0
        adj[index[b], index[a]] = 1.0
    degrees = adj.sum(axis=1)
    safe = np.maximum(degrees, 1.0)
    for ws, wn, bias in zip(params.w_self, params.w_neigh, params.bias):
        neigh_mean = (adj @ h) / safe[:, None]  # zero vector when a node has no neighbors
        h = np.tanh(h @ ws.T + neigh_mean @ wn.T + bias)
    return {node_id: h[index[node_id]].copy() for node_id in ids}


@dataclass(frozen=True)
class State:
    """Actor-critic state: the known-node set pooled into one vector by mean."""

    known: KnownNodeSet
    pooled: np.ndarray = field(repr=False)


def state_of(known: KnownNodeSet, embeddings: dict[str, np.ndarray], dim: int) -> State:
    if not known.ids:
        return State(known=known, pooled=np.zeros(dim))
    vectors = []
    for node_id in known.ids:
        if node_id not in embeddings:
            raise MissingEmbeddingError(node_id)
        vectors.append(embeddings[node_id])
    return State(known=known, pooled=np.mean(vectors, axis=0))
