"""Versioned prompt templates for every model touchpoint.

The first line of each prompt is a TASK tag so fixture and stub providers can
dispatch without natural-language understanding. Bumping PROMPT_VERSION
invalidates recorded fixtures on purpose.
"""

from __future__ import annotations

PROMPT_VERSION = "1"


def parse_case_prompt(case_text: str) -> str:
    return (
        f"TASK: parse_case v{PROMPT_VERSION}\n"
        "Split the case below into ISSUE, RULE, APPLICATION, CONCLUSION sections.\n"
        f"CASE:\n{case_text}"
    )


def summarize_prompt(issue: str, fact_labels: list[str]) -> str:
    return (
        f"TASK: summarize_question v{PROMPT_VERSION}\n"
        f"ISSUE: {issue}\n"
        f"FACTS: {' | '.join(fact_labels)}\n"
        "Write one comprehensive question that mentions every fact."
    )


def deficiency_prompt(question: str) -> str:
    return (
        f"TASK: deficiency v{PROMPT_VERSION}\n"
        "Answer strictly yes (information is missing) or no (complete).\n"
        f"QUESTION: {question}"
    )


def clarify_prompt(question: str, node_label: str, aliases: list[str]) -> str:
    return (
        f"TASK: clarify v{PROMPT_VERSION}\n"
        f"QUESTION: {question}\n"
        f"MISSING: {node_label}\n"
        f"ALIASES: {' | '.join(aliases)}\n"
        'Reply with JSON {"question": str, "options": [str, ...]} targeting the missing fact.'
    )


def answer_prompt(
    question: str,
    clarifications: list[tuple[str, str]],
    provisions: list[tuple[str, str]],
) -> str:
    clar_lines = "\n".join(f"Q: {c} / A: {u}" for c, u in clarifications)
    prov_lines = "\n".join(f"[{pid}] {title}" for pid, title in provisions)
    return (
        f"TASK: answer v{PROMPT_VERSION}\n"
        f"QUESTION: {question}\n"
        f"CLARIFICATIONS:\n{clar_lines}\n"
        f"PROVISIONS:\n{prov_lines}\n"
        "Respond with three sections labelled exactly 'Conclusion:', "
        "'Jurisprudential Analysis:' and 'Resolution Suggestions:', citing provisions as [id]."
    )
