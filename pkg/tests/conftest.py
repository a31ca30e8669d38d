import json

import pytest

import legal_assistant as la
from legal_assistant.detector import TemplateIndex
from legal_assistant.providers import StubModel
from legal_assistant.retrieval import ProvisionStore, ReferenceEmbedder
from legal_assistant.session import Engine, EngineConfig, EventLog


@pytest.fixture(scope="session")
def corpus10():
    return la.generate_synthetic_corpus(10, (3, 6), (1, 3), seed=11)


@pytest.fixture(scope="session")
def merged10(corpus10):
    return la.merge(corpus10.graphs)


@pytest.fixture(scope="session")
def templates10(corpus10):
    return TemplateIndex.build(corpus10.questions)


@pytest.fixture
def stub():
    return StubModel()


def provision_records(corpus, per_case=2):
    """Synthetic provision database: a couple of provisions per case, one per
    jurisdiction, whose text quotes the case's rule and fact labels."""
    records = []
    for i, case in enumerate(corpus.cases):
        g = case.graph
        for j in range(per_case):
            records.append(
                {
                    "id": f"prov-{i:03d}-{j}",
                    "jurisdiction": case.document.jurisdiction,
                    "title": f"Article {i * per_case + j + 1} on {g.rule_ids()[0]}",
                    "text": "Where "
                    + "; ".join(g.fact_ids())
                    + f", the {g.rule_ids()[j % len(g.rule_ids())]} applies.",
                }
            )
    return records


def write_provision_db(corpus, path, per_case=2):
    with open(path, "w") as fh:
        for record in provision_records(corpus, per_case):
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    return path


@pytest.fixture
def engine_factory(corpus10, merged10, templates10):
    """Engines over the shared corpus with deterministic ids and timestamps."""

    def make(model=None, config=None, regions=None):
        embedder = ReferenceEmbedder(dimension=128, seed=0)
        store = ProvisionStore.build(provision_records(corpus10), embedder)
        counter = iter(range(1, 100000))
        clock_counter = iter(range(1, 1000000))
        return Engine(
            graph=merged10,
            templates=templates10,
            store=store,
            model=model if model is not None else StubModel(),
            embedder=embedder,
            config=config or EngineConfig(),
            regions=regions,
            log=EventLog(clock=lambda: float(next(clock_counter))),
            id_generator=lambda: f"s-{next(counter):04d}",
        )

    return make
