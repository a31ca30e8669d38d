"""Provision retrieval: query composition, embeddings, cosine similarity, and an
exact exhaustive top-k scan.

The reference embedder hashes character n-grams (n in {2, 3}) into a fixed-size
L2-normalized vector, so retrieval is bit-reproducible without any hosted model.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .errors import (
    ArgumentError,
    ConfigError,
    DegenerateVectorError,
    NoProvisionsError,
)

QUERY_DELIMITER = "\n"


class EmbeddingProvider(Protocol):
    dimension: int
    fingerprint: str

    def embed(self, text: str) -> np.ndarray: ...


class ReferenceEmbedder:
    """Seeded character n-gram hashing embedder; deterministic across processes."""

    def __init__(self, dimension: int = 256, seed: int = 0):
        if dimension < 2:
            raise ConfigError("embedding dimension must be >= 2")
        self.dimension = dimension
        self.seed = seed
        self.fingerprint = f"reference-ngram-v1:d={dimension}:seed={seed}"

    def embed(self, text: str) -> np.ndarray:
        if not text:
            raise ArgumentError("cannot embed empty text")
        lowered = " ".join(text.lower().split())
        vec = np.zeros(self.dimension)
        for n in (2, 3):
            for i in range(max(len(lowered) - n + 1, 0)):
                gram = lowered[i : i + n]
                digest = hashlib.blake2b(
                    f"{self.seed}:{gram}".encode("utf-8"), digest_size=8
                ).digest()
                value = int.from_bytes(digest, "big")
                sign = 1.0 if (value >> 32) % 2 == 0 else -1.0
                vec[value % self.dimension] += sign
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            # pathological text whose gram signs cancel exactly
            vec[0] = 1.0
            norm = 1.0
        return vec / norm


@dataclass(frozen=True)
class LegalProvision:
    id: str
    jurisdiction: str
    title: str
    text: str
    embedding: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        if not self.jurisdiction:
            raise ArgumentError("provision jurisdiction must be non-empty")


@dataclass
class ProvisionStore:
    provisions: list[LegalProvision]
    fingerprint: str

    def __post_init__(self):
        ids = [p.id for p in self.provisions]
        if len(set(ids)) != len(ids):
            raise ArgumentError("provision ids must be unique")
        dims = {p.embedding.shape for p in self.provisions}
        if len(dims) > 1:
            raise ConfigError(f"mixed embedding dimensions in store: {dims}")

    @staticmethod
    def build(records: list[dict], embedder: EmbeddingProvider) -> "ProvisionStore":
        provisions = [
            LegalProvision(
                id=r["id"],
                jurisdiction=r["jurisdiction"],
                title=r["title"],
                text=r["text"],
                embedding=embedder.embed(f"{r['title']}\n{r['text']}"),
            )
            for r in records
        ]
        return ProvisionStore(provisions=provisions, fingerprint=embedder.fingerprint)

    @staticmethod
    def load(db_path: str | Path, embedder: EmbeddingProvider) -> "ProvisionStore":
        records = []
        with open(db_path) as fh:
            for line in fh:
                if line.strip():
                    records.append(json.loads(line))
        return ProvisionStore.build(records, embedder)


def compose_query(question: str, clarifications: list[tuple[str, str]]) -> str:
    """z: the user question, then each clarifying question followed by the
    selected option text, joined with a fixed delimiter."""
    parts = [question]
    for clar_text, selected in clarifications:
        parts.append(clar_text)
        parts.append(selected)
    return QUERY_DELIMITER.join(parts)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ArgumentError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateVectorError("cosine undefined for zero-norm vectors")
    return float(np.dot(a, b) / (norm_a * norm_b))


@dataclass(frozen=True)
class RankedProvision:
    provision: LegalProvision
    score: float


def top_k(
    store: ProvisionStore,
    query: np.ndarray,
    m: int,
    jurisdiction: str | None = None,
) -> list[RankedProvision]:
    """Exact exhaustive scan: the m highest-cosine provisions, descending,
    ties broken by provision id ascending."""
    if m < 1:
        raise ArgumentError("m must be >= 1")
    pool = store.provisions
    if jurisdiction is not None:
        pool = [p for p in pool if p.jurisdiction == jurisdiction]
    if not pool:
        raise NoProvisionsError(
            f"no provisions available (jurisdiction={jurisdiction!r})"
        )
    scored = [RankedProvision(p, cosine(query, p.embedding)) for p in pool]
    scored.sort(key=lambda rp: (-rp.score, rp.provision.id))
    return scored[:m]
