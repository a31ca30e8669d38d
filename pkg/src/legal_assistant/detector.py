"""Information-deficiency gate: is the user's question missing key facts?

Two backends share one verdict type. The coverage backend is the reference
semantics (template matching over the merged graph); the provider backend
parses a strict yes/no from a language model and never coerces anything else.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import prompts
from .corpus import LabeledQuestion, SummaryQuestion
from .errors import ArgumentError, NoMatchError, ProtocolError
from .graph import FactRuleGraph, KnownNodeSet, match_known_nodes
from .providers import LanguageModelProvider

log = logging.getLogger(__name__)

COVERAGE = "coverage"
PROVIDER = "provider"

# a template must share at least this many matched nodes with the question
# to count as "nearest"; below it the gate assumes deficiency
MIN_TEMPLATE_OVERLAP = 1


@dataclass(frozen=True)
class DeficiencyVerdict:
    deficient: bool
    backend: str
    matched_nodes: tuple[str, ...] = ()
    template_id: str | None = None


@dataclass
class TemplateIndex:
    """Summary questions indexed for nearest-template lookup."""

    templates: dict[str, SummaryQuestion] = field(default_factory=dict)

    @staticmethod
    def build(questions: list[SummaryQuestion]) -> "TemplateIndex":
        index = TemplateIndex()
        for q in questions:
            if q.question_id in index.templates:
                raise ArgumentError(f"duplicate template id {q.question_id!r}")
            index.templates[q.question_id] = q
        return index

    def nearest(self, known: KnownNodeSet) -> SummaryQuestion:
        """Best template by matched-node overlap; ties break toward more overlap,
        then the lexicographically smallest template id."""
        known_ids = known.as_set()
        best: SummaryQuestion | None = None
        best_overlap = -1
        for template_id in sorted(self.templates):
            template = self.templates[template_id]
            overlap = len(known_ids & template.key_nodes)
            if overlap > best_overlap:
                best, best_overlap = template, overlap
        if best is None or best_overlap < MIN_TEMPLATE_OVERLAP:
            raise NoMatchError("no template clears the minimum node overlap")
        return best


def detect_deficiency(
    question: str,
    g: FactRuleGraph,
    templates: TemplateIndex,
    backend: str = COVERAGE,
    provider: LanguageModelProvider | None = None,
    threshold: float = 0.8,
) -> DeficiencyVerdict:
    if backend == COVERAGE:
        known = match_known_nodes(g, question, threshold=threshold)
        try:
            template = templates.nearest(known)
        except NoMatchError:
            # question resembles no known template: treat as deficient
            return DeficiencyVerdict(
                deficient=True, backend=COVERAGE, matched_nodes=known.ids, template_id=None
            )
        deficient = not template.key_nodes <= known.as_set()
        return DeficiencyVerdict(
            deficient=deficient,
            backend=COVERAGE,
            matched_nodes=known.ids,
            template_id=template.question_id,
        )
    if backend == PROVIDER:
        if provider is None:
            raise ArgumentError("provider backend requires a provider")
        raw = provider.complete(prompts.deficiency_prompt(question)).strip().lower()
        if raw not in ("yes", "no"):
            raise ProtocolError(f"deficiency response must be yes or no, got {raw!r}")
        return DeficiencyVerdict(deficient=(raw == "yes"), backend=PROVIDER)
    raise ArgumentError(f"unknown detector backend {backend!r}")


def label_training_pairs(corpus: list[LabeledQuestion], out_path: str | Path) -> dict[str, int]:
    """Emit prompt/completion pairs (completion yes = deficient) as JSON lines."""
    if not corpus:
        raise ArgumentError("labeled corpus is empty")
    counts = {"deficient": 0, "complete": 0}
    with open(out_path, "w") as fh:
        for item in corpus:
            counts[item.label] += 1
            fh.write(
                json.dumps(
                    {
                        "prompt": prompts.deficiency_prompt(item.text),
                        "completion": "yes" if item.label == "deficient" else "no",
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    if 0 in counts.values():
        log.warning("training pairs are single-class: %s", counts)
    return counts


def read_training_pairs(path: str | Path) -> list[dict]:
    pairs = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                pairs.append(json.loads(line))
    return pairs
