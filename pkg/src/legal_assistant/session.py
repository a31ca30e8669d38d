"""Dialogue sessions: question + location intake, deficiency gate, clarification
rounds with a completeness re-check, retrieval, and the three-part final answer.

All state changes flow through an append-only event log; the engine applies the
same reducer it persists, so replaying the log reproduces session state exactly.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Callable

from .clarifier import ClarifyingQuestion, generate_clarifications
from .detector import COVERAGE, TemplateIndex, detect_deficiency
from .errors import (
    ArgumentError,
    IncompleteSubmissionError,
    NoMatchError,
    ProtocolError,
    StateError,
    UnknownNodeError,
    UnsupportedRegionError,
)
from .graph import FactRuleGraph, match_known_nodes
from .providers import TERMINAL_OPTION, LanguageModelProvider
from . import prompts
from .retrieval import EmbeddingProvider, ProvisionStore, compose_query, top_k

AWAITING_INTAKE = "awaiting_intake"
CLARIFYING = "clarifying"
COMPLETE = "complete"
ANSWERED = "answered"
FAILED = "failed"

# legal state-machine edges; anything else is a bug
TRANSITIONS = {
    (AWAITING_INTAKE, CLARIFYING),
    (AWAITING_INTAKE, COMPLETE),
    (CLARIFYING, CLARIFYING),
    (CLARIFYING, COMPLETE),
    (COMPLETE, ANSWERED),
    (COMPLETE, FAILED),
}

DEFAULT_REGIONS = {
    "CN-ZJ": "Zhejiang, China",
    "CN-TJ": "Tianjin, China",
    "US-MA": "Massachusetts, USA",
    "US-CA": "California, USA",
    "DE-BY": "Bavaria, Germany",
}


@dataclass(frozen=True)
class Selection:
    question_index: int
    clarification_index: int
    option_index: int
    option_text: str


@dataclass(frozen=True)
class FinalAnswer:
    conclusion: str
    jurisprudential_analysis: str
    resolution_suggestions: str
    cited_provisions: tuple[str, ...]


@dataclass
class DialogueSession:
    session_id: str
    question: str
    location: str
    question_index: int
    state: str = AWAITING_INTAKE
    round: int = 0
    max_rounds: int = 3
    clarifications: list[tuple[ClarifyingQuestion, Selection | None]] = field(
        default_factory=list
    )
    best_effort: bool = False
    answer: FinalAnswer | None = None
    failure: dict | None = None

    def pending(self) -> list[ClarifyingQuestion]:
        return [c for c, s in self.clarifications if s is None]

    def answered_pairs(self) -> list[tuple[ClarifyingQuestion, Selection]]:
        return [(c, s) for c, s in self.clarifications if s is not None]

    def transition(self, new_state: str):
        if (self.state, new_state) not in TRANSITIONS:
            raise StateError(f"illegal transition {self.state} -> {new_state}")
        self.state = new_state

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "question": self.question,
            "location": self.location,
            "state": self.state,
            "round": self.round,
            "best_effort": self.best_effort,
            "clarifications": [
                {
                    "question_index": c.question_index,
                    "clarification_index": c.clarification_index,
                    "text": c.text,
                    "node_id": c.node_id,
                    "options": list(c.options),
                    "selection": None
                    if s is None
                    else {"option_index": s.option_index, "option_text": s.option_text},
                }
                for c, s in self.clarifications
            ],
            "answer": None
            if self.answer is None
            else {
                "conclusion": self.answer.conclusion,
                "jurisprudential_analysis": self.answer.jurisprudential_analysis,
                "resolution_suggestions": self.answer.resolution_suggestions,
                "cited_provisions": list(self.answer.cited_provisions),
            },
            "failure": self.failure,
        }


# --- event log --------------------------------------------------------------


class EventLog:
    """Append-only event records; optionally mirrored to a JSON-lines file."""

    def __init__(self, path=None, clock: Callable[[], float] = time.time):
        self.path = path
        self.clock = clock
        self.events: list[dict] = []
        self._seq: dict[str, int] = {}

    def append(self, session_id: str, event: str, payload: dict) -> dict:
        seq = self._seq.get(session_id, 0) + 1
        self._seq[session_id] = seq
        record = {
            "session_id": session_id,
            "seq": seq,
            "event": event,
            "payload": payload,
            "timestamp": self.clock(),
        }
        self.events.append(record)
        if self.path is not None:
            import json

            with open(self.path, "a") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return record


def _clarification_from_payload(item: dict) -> ClarifyingQuestion:
    return ClarifyingQuestion(
        question_index=item["question_index"],
        clarification_index=item["clarification_index"],
        text=item["text"],
        node_id=item["node_id"],
        options=tuple(item["options"]),
    )


def apply_event(sessions: dict[str, DialogueSession], record: dict, max_rounds: int = 3):
    """Pure state reducer; the engine and log replay both go through here."""
    sid = record["session_id"]
    event = record["event"]
    payload = record["payload"]
    if event == "session_opened":
        sessions[sid] = DialogueSession(
            session_id=sid,
            question=payload["question"],
            location=payload["location"],
            question_index=payload["question_index"],
            max_rounds=max_rounds,
        )
        return
    session = sessions[sid]
    if event == "deficiency_checked":
        pass  # informational; state advances on the follow-up event
    elif event == "clarifications_generated":
        session.transition(CLARIFYING)
        session.round = payload["round"]
        for item in payload["clarifications"]:
            session.clarifications.append((_clarification_from_payload(item), None))
    elif event == "selections_submitted":
        by_index = {
            c.clarification_index: i
            for i, (c, s) in enumerate(session.clarifications)
            if s is None
        }
        for item in payload["selections"]:
            i = by_index[item["clarification_index"]]
            clar, _ = session.clarifications[i]
            session.clarifications[i] = (
                clar,
                Selection(
                    question_index=clar.question_index,
                    clarification_index=clar.clarification_index,
                    option_index=item["option_index"],
                    option_text=item["option_text"],
                ),
            )
    elif event == "completeness_checked":
        if payload["complete"]:
            session.best_effort = payload.get("best_effort", False)
            session.transition(COMPLETE)
    elif event == "answer_composed":
        session.answer = FinalAnswer(
            conclusion=payload["conclusion"],
            jurisprudential_analysis=payload["jurisprudential_analysis"],
            resolution_suggestions=payload["resolution_suggestions"],
            cited_provisions=tuple(payload["cited_provisions"]),
        )
        session.transition(ANSWERED)
    elif event == "failed":
        session.failure = {"code": payload["code"], "message": payload["message"]}
        session.transition(FAILED)
    else:
        raise ArgumentError(f"unknown event type {event!r}")


def replay_events(events: list[dict], max_rounds: int = 3) -> dict[str, DialogueSession]:
    sessions: dict[str, DialogueSession] = {}
    for record in events:
        apply_event(sessions, record, max_rounds=max_rounds)
    return sessions


# --- engine -----------------------------------------------------------------


@dataclass
class EngineConfig:
    max_rounds: int = 3
    retrieval_m: int = 5
    match_threshold: float = 0.8
    use_provider_clarifications: bool = True


_SECTION_RE = re.compile(
    r"Conclusion:\s*(?P<conclusion>.*?)\s*"
    r"Jurisprudential Analysis:\s*(?P<analysis>.*?)\s*"
    r"Resolution Suggestions:\s*(?P<suggestions>.*)",
    re.DOTALL,
)


class Engine:
    """Drives sessions against a frozen graph, template index, and provision store."""

    def __init__(
        self,
        graph: FactRuleGraph,
        templates: TemplateIndex,
        store: ProvisionStore,
        model: LanguageModelProvider | None,
        embedder: EmbeddingProvider,
        config: EngineConfig | None = None,
        regions: dict[str, str] | None = None,
        log: EventLog | None = None,
        id_generator: Callable[[], str] | None = None,
    ):
        self.graph = graph
        self.templates = templates
        self.store = store
        self.model = model
        self.embedder = embedder
        self.config = config or EngineConfig()
        self.regions = regions if regions is not None else dict(DEFAULT_REGIONS)
        self.log = log or EventLog()
        self.sessions: dict[str, DialogueSession] = {}
        self._counter = 0
        self._id_generator = id_generator

    # -- plumbing

    def _emit(self, sid: str, event: str, payload: dict):
        record = self.log.append(sid, event, payload)
        apply_event(self.sessions, record, max_rounds=self.config.max_rounds)

    def _new_session_id(self) -> str:
        if self._id_generator is not None:
            return self._id_generator()
        import uuid

        return uuid.uuid4().hex

    def get(self, session_id: str) -> DialogueSession:
        if session_id not in self.sessions:
            raise UnknownNodeError(f"unknown session {session_id!r}")
        return self.sessions[session_id]

    # -- completeness machinery

    def _augmented_text(self, session: DialogueSession) -> str:
        parts = [session.question]
        for _, selection in session.answered_pairs():
            if selection.option_text != TERMINAL_OPTION:
                parts.append(selection.option_text)
        return " ".join(parts)

    def _missing_nodes(self, session: DialogueSession) -> list[str]:
        known = match_known_nodes(
            self.graph, self._augmented_text(session), self.config.match_threshold
        )
        try:
            template = self.templates.nearest(known)
        except NoMatchError:
            return []
        return sorted(template.key_nodes - known.as_set())

    def check_completeness(self, session_id: str) -> tuple[bool, list[str]]:
        """(complete, missing ids). Complete when nothing is missing or the
        round cap has been reached."""
        session = self.get(session_id)
        missing = self._missing_nodes(session)
        if not missing:
            return True, []
        if session.round >= self.config.max_rounds:
            return True, missing
        return False, missing

    def _generate_round(self, session: DialogueSession, missing: list[str], round_no: int):
        nodes = [self.graph.nodes[i] for i in missing]
        provider = self.model if self.config.use_provider_clarifications else None
        clars = generate_clarifications(
            session.question, nodes, provider, question_index=session.question_index
        )
        # clarification_index keeps counting across rounds
        offset = len(session.clarifications)
        payload = {
            "round": round_no,
            "clarifications": [
                {
                    "question_index": c.question_index,
                    "clarification_index": offset + j,
                    "text": c.text,
                    "node_id": c.node_id,
                    "options": list(c.options),
                }
                for j, c in enumerate(clars, start=1)
            ],
        }
        self._emit(session.session_id, "clarifications_generated", payload)

    # -- public operations

    def open_session(self, question: str, location: str) -> DialogueSession:
        if not question or not question.strip():
            raise ArgumentError("question must be non-empty")
        if location not in self.regions:
            raise UnsupportedRegionError(f"unsupported region {location!r}")
        sid = self._new_session_id()
        self._counter += 1
        self._emit(
            sid,
            "session_opened",
            {"question": question, "location": location, "question_index": self._counter},
        )
        verdict = detect_deficiency(
            question,
            self.graph,
            self.templates,
            backend=COVERAGE,
            threshold=self.config.match_threshold,
        )
        self._emit(
            sid,
            "deficiency_checked",
            {
                "deficient": verdict.deficient,
                "template_id": verdict.template_id,
                "matched_nodes": list(verdict.matched_nodes),
            },
        )
        session = self.sessions[sid]
        missing = self._missing_nodes(session) if verdict.deficient else []
        if verdict.deficient and missing:
            self._generate_round(session, missing, round_no=1)
        else:
            self._emit(
                sid,
                "completeness_checked",
                {"complete": True, "missing": missing, "best_effort": bool(missing)},
            )
        return self.get(sid)

    def submit_selections(
        self, session_id: str, selections: list[tuple[int, int]]
    ) -> DialogueSession:
        """selections: (clarification_index, option_index) pairs; every pending
        clarification must be answered exactly once."""
        session = self.get(session_id)
        if session.state != CLARIFYING:
            raise StateError(f"session is {session.state}, not clarifying")
        pending = {c.clarification_index: c for c in session.pending()}
        given = [j for j, _ in selections]
        if sorted(given) != sorted(pending):
            raise IncompleteSubmissionError(
                f"expected selections for {sorted(pending)}, got {sorted(given)}"
            )
        resolved = []
        for j, k in selections:
            clar = pending[j]
            if not 0 <= k < len(clar.options):
                raise ArgumentError(
                    f"option index {k} out of range for clarification {j}"
                )
            resolved.append(
                {
                    "clarification_index": j,
                    "option_index": k,
                    "option_text": clar.options[k],
                }
            )
        self._emit(session_id, "selections_submitted", {"selections": resolved})
        session = self.get(session_id)
        complete, missing = self.check_completeness(session_id)
        if complete:
            self._emit(
                session_id,
                "completeness_checked",
                {"complete": True, "missing": missing, "best_effort": bool(missing)},
            )
        else:
            self._generate_round(session, missing, round_no=session.round + 1)
        return self.get(session_id)

    def compose_answer(self, session_id: str) -> DialogueSession:
        session = self.get(session_id)
        if session.state != COMPLETE:
            raise StateError(f"session is {session.state}, not complete")
        pairs = [
            (c.text, s.option_text) for c, s in session.answered_pairs()
        ]
        query_text = compose_query(session.question, pairs)
        query_vec = self.embedder.embed(query_text)
        ranked = top_k(
            self.store, query_vec, self.config.retrieval_m, jurisdiction=session.location
        )
        retrieved_ids = [rp.provision.id for rp in ranked]
        prompt = prompts.answer_prompt(
            session.question,
            pairs,
            [(rp.provision.id, rp.provision.title) for rp in ranked],
        )
        # ProviderError propagates: retryable, session stays Complete
        raw = self.model.complete(prompt)
        match = _SECTION_RE.search(raw)
        sections = None
        if match:
            sections = {
                "conclusion": match.group("conclusion").strip(),
                "jurisprudential_analysis": match.group("analysis").strip(),
                "resolution_suggestions": match.group("suggestions").strip(),
            }
        if sections is None or not all(sections.values()):
            self._emit(
                session_id,
                "failed",
                {
                    "code": "protocol_violation",
                    "message": "answer response is missing a mandatory section",
                },
            )
            raise ProtocolError("answer response is missing a mandatory section")
        cited = [i for i in retrieved_ids if f"[{i}]" in raw] or retrieved_ids
        self._emit(
            session_id,
            "answer_composed",
            {
                **sections,
                "cited_provisions": cited,
                "retrieved": retrieved_ids,
            },
        )
        return self.get(session_id)
