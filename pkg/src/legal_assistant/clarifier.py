"""Clarifying-question generation: one multiple-choice question per missing node.

The provider path uses in-context generation and validates the response against
a strict schema; the template path is a deterministic offline fallback.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import prompts
from .errors import ArgumentError, ProtocolError, ProviderError
from .graph import FACT, FactRuleNode
from .providers import TERMINAL_OPTION, LanguageModelProvider


@dataclass(frozen=True)
class ClarifyingQuestion:
    question_index: int       # i: which user question
    clarification_index: int  # j: position within the clarification round
    text: str
    node_id: str
    options: tuple[str, ...]  # unique, terminal "other / not sure" option last

    def __post_init__(self):
        if len(self.options) < 2:
            raise ProtocolError("a clarifying question needs at least two options")
        if len(set(self.options)) != len(self.options):
            raise ProtocolError("options must be unique")
        if self.options[-1] != TERMINAL_OPTION:
            raise ProtocolError("the terminal option must come last")
        if not self.text:
            raise ProtocolError("clarifying question text is empty")


def template_clarification(
    node: FactRuleNode, question_index: int = 0, clarification_index: int = 1
) -> ClarifyingQuestion:
    """Deterministic fallback: text from a fixed template, options from aliases."""
    if node.kind != FACT:
        raise ArgumentError(f"can only clarify fact nodes, got {node.kind!r}")
    aliases = sorted(node.aliases)
    if len(aliases) >= 2:
        options = tuple(aliases) + (TERMINAL_OPTION,)
    else:
        options = (
            f"Yes, {node.label} applies",
            f"No, {node.label} does not apply",
            TERMINAL_OPTION,
        )
    return ClarifyingQuestion(
        question_index=question_index,
        clarification_index=clarification_index,
        text=f"Does your situation involve {node.label}?",
        node_id=node.id,
        options=options,
    )


def _parse_provider_clarification(
    raw: str, node: FactRuleNode, question_index: int, clarification_index: int
) -> ClarifyingQuestion:
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"clarification response is not JSON: {raw[:80]!r}") from exc
    if not isinstance(payload, dict) or "question" not in payload or "options" not in payload:
        raise ProtocolError("clarification response must contain question and options")
    options = payload["options"]
    if not isinstance(options, list) or not all(isinstance(o, str) for o in options):
        raise ProtocolError("options must be a list of strings")
    return ClarifyingQuestion(
        question_index=question_index,
        clarification_index=clarification_index,
        text=str(payload["question"]),
        node_id=node.id,
        options=tuple(options),
    )


def generate_clarifications(
    question: str,
    missing: list[FactRuleNode],
    provider: LanguageModelProvider | None,
    question_index: int = 0,
    fallback: bool = True,
) -> list[ClarifyingQuestion]:
    """One clarifying question per missing node, in the given order."""
    if not missing:
        raise ArgumentError("missing node list is empty")
    out = []
    for j, node in enumerate(missing, start=1):
        if provider is None:
            out.append(template_clarification(node, question_index, j))
            continue
        try:
            raw = provider.complete(
                prompts.clarify_prompt(question, node.label, sorted(node.aliases))
            )
        except ProviderError:
            if not fallback:
                raise
            out.append(template_clarification(node, question_index, j))
            continue
        out.append(_parse_provider_clarification(raw, node, question_index, j))
    return out
