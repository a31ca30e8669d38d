"""Interactive legal question answering: deficiency detection, fact-rule graphs,
missing-node prediction, clarifying questions, provision retrieval, and
session-driven answer composition."""

from .graph import FactRuleGraph, FactRuleNode, KnownNodeSet, match_known_nodes, merge, neighborhood
from .corpus import (
    CaseDocument,
    IracFrame,
    MaskedQuestion,
    SummaryQuestion,
    generate_synthetic_corpus,
    mask_nodes,
)
from .detector import DeficiencyVerdict, TemplateIndex, detect_deficiency
from .retrieval import ProvisionStore, ReferenceEmbedder, compose_query, cosine, top_k
from .session import DialogueSession, Engine, EngineConfig

__all__ = [
    "CaseDocument",
    "DeficiencyVerdict",
    "DialogueSession",
    "Engine",
    "EngineConfig",
    "FactRuleGraph",
    "FactRuleNode",
    "IracFrame",
    "KnownNodeSet",
    "MaskedQuestion",
    "ProvisionStore",
    "ReferenceEmbedder",
    "SummaryQuestion",
    "TemplateIndex",
    "compose_query",
    "cosine",
    "detect_deficiency",
    "generate_synthetic_corpus",
    "mask_nodes",
    "match_known_nodes",
    "merge",
    "neighborhood",
    "top_k",
]
