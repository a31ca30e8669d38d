"""Language-model provider contract with record/replay fixtures.

One contract covers all four model touchpoints (deficiency check, question
summarization, clarification generation, answer generation). Fixture mode is
strict: a request whose hash has no recorded response is a hard error, which
keeps the test suite hermetic.
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path
from typing import Callable, Protocol

from .errors import FixtureMissError, ProviderError

TERMINAL_OPTION = "Other / not sure"


class LanguageModelProvider(Protocol):
    def complete(self, prompt: str) -> str: ...


def request_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


class FixtureReplayModel:
    """Replays canned responses keyed by request hash. Misses are hard errors."""

    def __init__(self, fixtures: dict[str, dict]):
        self._fixtures = fixtures

    @staticmethod
    def from_file(path: str | Path) -> "FixtureReplayModel":
        return FixtureReplayModel(json.loads(Path(path).read_text()))

    def complete(self, prompt: str) -> str:
        key = request_hash(prompt)
        if key not in self._fixtures:
            task = prompt.splitlines()[0] if prompt else "<empty>"
            raise FixtureMissError(f"no recorded response for {task!r} (hash {key[:12]})")
        return self._fixtures[key]["response"]


class RecordingModel:
    """Wraps a provider and records every exchange for later replay."""

    def __init__(self, inner: LanguageModelProvider):
        self._inner = inner
        self.fixtures: dict[str, dict] = {}

    def complete(self, prompt: str) -> str:
        response = self._inner.complete(prompt)
        self.fixtures[request_hash(prompt)] = {"prompt": prompt, "response": response}
        return response

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.fixtures, indent=2, sort_keys=True))


class FailingModel:
    """Always fails; used to exercise retryable-error paths."""

    def complete(self, prompt: str) -> str:
        raise ProviderError("provider unavailable")


_SECTION_NAMES = ("ISSUE", "RULE", "APPLICATION", "CONCLUSION")


class StubModel:
    """Deterministic stand-in for a live model.

    Dispatches on the TASK tag of the prompt and synthesizes well-formed output,
    so recorded transcripts are reproducible without network access.
    """

    def __init__(self, deficiency_oracle: Callable[[str], str] | None = None):
        self._deficiency_oracle = deficiency_oracle

    def complete(self, prompt: str) -> str:
        head = prompt.splitlines()[0] if prompt else ""
        match = re.match(r"TASK: (\w+)", head)
        if not match:
            raise ProviderError(f"unrecognized prompt head {head!r}")
        task = match.group(1)
        handler = getattr(self, f"_do_{task}", None)
        if handler is None:
            raise ProviderError(f"no handler for task {task!r}")
        return handler(prompt)

    @staticmethod
    def _field(prompt: str, name: str) -> str:
        match = re.search(rf"^{name}: (.*)$", prompt, re.MULTILINE)
        return match.group(1).strip() if match else ""

    def _do_parse_case(self, prompt: str) -> str:
        body = prompt.split("CASE:\n", 1)[1] if "CASE:\n" in prompt else ""
        sections = {}
        pattern = "|".join(_SECTION_NAMES)
        for m in re.finditer(rf"({pattern}):(.*?)(?=(?:{pattern}):|\Z)", body, re.DOTALL):
            sections[m.group(1).lower()] = m.group(2).strip()
        return json.dumps(sections, sort_keys=True)

    def _do_summarize_question(self, prompt: str) -> str:
        facts = [f.strip() for f in self._field(prompt, "FACTS").split("|") if f.strip()]
        if not facts:
            raise ProviderError("no facts to summarize")
        if len(facts) == 1:
            listing = facts[0]
        else:
            listing = ", ".join(facts[:-1]) + ", and " + facts[-1]
        return f"What should be done given that {listing}?"

    def _do_deficiency(self, prompt: str) -> str:
        question = self._field(prompt, "QUESTION")
        if self._deficiency_oracle is not None:
            return self._deficiency_oracle(question)
        return "no"

    def _do_clarify(self, prompt: str) -> str:
        label = self._field(prompt, "MISSING")
        aliases = [a.strip() for a in self._field(prompt, "ALIASES").split("|") if a.strip()]
        options = sorted(dict.fromkeys(aliases))
        if len(options) < 2:
            options = [f"Yes, {label} applies", f"No, {label} does not apply"]
        return json.dumps(
            {
                "question": f"Does your situation involve {label}?",
                "options": options + [TERMINAL_OPTION],
            },
            sort_keys=True,
        )

    def _do_answer(self, prompt: str) -> str:
        question = self._field(prompt, "QUESTION")
        prov_block = prompt.split("PROVISIONS:\n", 1)[1] if "PROVISIONS:\n" in prompt else ""
        ids = re.findall(r"^\[([^\]]+)\]", prov_block, re.MULTILINE)
        cites = " ".join(f"[{i}]" for i in ids)
        primary = f"[{ids[0]}]" if ids else "the applicable law"
        return (
            f"Conclusion: Based on the facts provided, the matter of {question!r} "
            f"is governed primarily by {primary}.\n"
            f"Jurisprudential Analysis: The stated facts engage the cited provisions "
            f"{cites}; each element described by the user maps onto the conditions "
            f"those provisions set out.\n"
            f"Resolution Suggestions: Gather documentary evidence for each fact, then "
            f"seek enforcement or settlement under {primary}."
        )
