"""Service wiring: configuration, provider registry, engine assembly, HTTP API.

Fixture mode is fully hermetic (replayed responses, reference embedder,
deterministic ids and timestamps); live mode reads credentials from the
environment and talks to an OpenAI-compatible endpoint.
"""

from __future__ import annotations

import itertools
import json
import os
import time
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel

from .detector import TemplateIndex
from .corpus import SummaryQuestion
from .errors import ConfigError, LegalAssistantError, ProviderError, UnknownNodeError
from .graph import FactRuleGraph
from .providers import FixtureReplayModel, LanguageModelProvider, StubModel
from .retrieval import ProvisionStore, ReferenceEmbedder
from .session import DEFAULT_REGIONS, Engine, EngineConfig, EventLog

PROVIDER_MODES = ("fixture", "stub", "live")


@dataclass
class ServiceConfig:
    graph_path: str
    sidecar_path: str
    provisions_path: str
    provider: str = "stub"
    fixtures_path: str | None = None
    session_log_path: str | None = None
    checkpoint_path: str | None = None
    retrieval_m: int = 5
    max_rounds: int = 3
    match_threshold: float = 0.8
    seed: int = 0
    embedding_dim: int = 256
    host: str = "127.0.0.1"
    port: int = 8000
    regions: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_REGIONS))

    def __post_init__(self):
        if self.provider not in PROVIDER_MODES:
            raise ConfigError(f"provider must be one of {PROVIDER_MODES}")
        if self.provider == "fixture" and not self.fixtures_path:
            raise ConfigError("fixture mode requires fixtures_path")
        for path in (self.graph_path, self.sidecar_path, self.provisions_path):
            if not Path(path).exists():
                raise ConfigError(f"artifact not found: {path}")

    @staticmethod
    def from_file(path: str | Path) -> "ServiceConfig":
        payload = json.loads(Path(path).read_text())
        return ServiceConfig(**payload)


class OpenAICompatibleModel:
    """Minimal live-provider client; credentials come from the environment."""

    def __init__(self):
        self.base_url = os.environ.get("LEGAL_ASSISTANT_API_BASE")
        self.api_key = os.environ.get("LEGAL_ASSISTANT_API_KEY")
        self.model = os.environ.get("LEGAL_ASSISTANT_MODEL", "gpt-4o-mini")
        if not self.base_url or not self.api_key:
            raise ConfigError(
                "live mode needs LEGAL_ASSISTANT_API_BASE and LEGAL_ASSISTANT_API_KEY"
            )

    def complete(self, prompt: str) -> str:
        body = json.dumps(
            {"model": self.model, "messages": [{"role": "user", "content": prompt}]}
        ).encode("utf-8")
        request = urllib.request.Request(
            f"{self.base_url.rstrip('/')}/chat/completions",
            data=body,
            headers={
                "Content-Type": "application/json",
                "Authorization": f"Bearer {self.api_key}",
            },
        )
        try:
            with urllib.request.urlopen(request, timeout=60) as response:
                payload = json.loads(response.read())
        except OSError as exc:
            raise ProviderError(f"live provider call failed: {exc}") from exc
        return payload["choices"][0]["message"]["content"]


def provider_registry(config: ServiceConfig) -> tuple[LanguageModelProvider, ReferenceEmbedder]:
    """One language-model provider and one embedding provider per the config mode."""
    embedder = ReferenceEmbedder(dimension=config.embedding_dim, seed=config.seed)
    if config.provider == "fixture":
        return FixtureReplayModel.from_file(config.fixtures_path), embedder
    if config.provider == "stub":
        return StubModel(), embedder
    return OpenAICompatibleModel(), embedder


def load_templates(sidecar_path: str | Path) -> TemplateIndex:
    payload = json.loads(Path(sidecar_path).read_text())
    questions = [
        SummaryQuestion(
            question_id=c["question"]["question_id"],
            text=c["question"]["text"],
            key_nodes=frozenset(c["question"]["key_nodes"]),
            source_case=c["id"],
        )
        for c in payload["cases"]
    ]
    return TemplateIndex.build(questions)


def build_engine(config: ServiceConfig) -> Engine:
    graph = FactRuleGraph.from_json(Path(config.graph_path).read_text())
    templates = load_templates(config.sidecar_path)
    model, embedder = provider_registry(config)
    store = ProvisionStore.load(config.provisions_path, embedder)
    deterministic = config.provider in ("fixture", "stub")
    counter = itertools.count(1)
    log = EventLog(
        path=config.session_log_path,
        clock=(lambda: float(next(counter))) if deterministic else time.time,
    )
    id_counter = itertools.count(1)
    return Engine(
        graph=graph,
        templates=templates,
        store=store,
        model=model,
        embedder=embedder,
        config=EngineConfig(
            max_rounds=config.max_rounds,
            retrieval_m=config.retrieval_m,
            match_threshold=config.match_threshold,
        ),
        regions=config.regions,
        log=log,
        id_generator=(lambda: f"s-{next(id_counter):04d}") if deterministic else None,
    )


# --- HTTP API ---------------------------------------------------------------

_STATUS_BY_CODE = {
    "bad_argument": 400,
    "parse_error": 400,
    "invalid_state": 409,
    "incomplete_submission": 400,
    "unsupported_region": 422,
    "unknown_node": 404,
    "no_template_match": 400,
    "protocol_violation": 502,
    "provider_failure": 503,
    "fixture_miss": 503,
    "bad_config": 500,
}


class CreateSessionBody(BaseModel):
    question: str
    location: str


class SelectionItem(BaseModel):
    clarification_index: int
    option_index: int


class SelectionsBody(BaseModel):
    selections: list[SelectionItem]


def create_app(engine: Engine):
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse

    app = FastAPI(title="legal-assistant", version="1.0")

    @app.exception_handler(LegalAssistantError)
    async def on_domain_error(request: Request, exc: LegalAssistantError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        return JSONResponse(
            status_code=status,
            content={"error": exc.code, "message": str(exc), "retryable": exc.retryable},
        )

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/regions")
    def regions():
        return [
            {"code": code, "name": name} for code, name in sorted(engine.regions.items())
        ]

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = engine.open_session(body.question, body.location)
        return session.to_dict()

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return engine.get(session_id).to_dict()

    @app.post("/v1/sessions/{session_id}/selections")
    def submit_selections(session_id: str, body: SelectionsBody):
        session = engine.submit_selections(
            session_id,
            [(s.clarification_index, s.option_index) for s in body.selections],
        )
        return session.to_dict()

    @app.post("/v1/sessions/{session_id}/answer")
    def compose_answer(session_id: str):
        return engine.compose_answer(session_id).to_dict()

    @app.get("/v1/sessions/{session_id}/answer")
    def get_answer(session_id: str):
        session = engine.get(session_id)
        if session.answer is None:
            raise UnknownNodeError(f"session {session_id} has no answer yet")
        return session.to_dict()["answer"]

    return app
