"""
A full clarification dialogue, end to end
=========================================

Stages the service artifacts in a temporary directory, opens a session on a
question with a missing fact, answers the clarifying questions, and prints
the three-part final answer. Everything runs hermetically on the stub model.
"""

import json
import tempfile
from pathlib import Path

import legal_assistant as la
from legal_assistant.corpus import mask_nodes, write_corpus
from legal_assistant.service import ServiceConfig, build_engine

root = Path(tempfile.mkdtemp())

# stage the three artifacts the service consumes
corpus = la.generate_synthetic_corpus(10, (3, 6), (1, 3), seed=11)
write_corpus(corpus, root / "cases.jsonl", root / "sidecar.json")
(root / "graph.json").write_text(la.merge(corpus.graphs).to_json())
with open(root / "provisions.jsonl", "w") as fh:
    for i, case in enumerate(corpus.cases):
        g = case.graph
        fh.write(json.dumps({
            "id": f"prov-{i:03d}",
            "jurisdiction": case.document.jurisdiction,
            "title": f"Article {i + 1} on {g.rule_ids()[0]}",
            "text": "Where " + "; ".join(g.fact_ids()) + f", the {g.rule_ids()[0]} applies.",
        }) + "\n")

engine = build_engine(ServiceConfig(
    graph_path=str(root / "graph.json"),
    sidecar_path=str(root / "sidecar.json"),
    provisions_path=str(root / "provisions.jsonl"),
    provider="stub",
))

# hide 40% of a question's key facts, then ask it
case = corpus.cases[0]
masked = mask_nodes(case.question, 0.4, seed=3)
print(f"asking ({case.document.jurisdiction}): {masked.text}")
print(f"hidden facts: {sorted(masked.masked_nodes)}")

session = engine.open_session(masked.text, case.document.jurisdiction)
while session.state == "clarifying":
    print(f"\n-- clarification round {session.round} --")
    picks = []
    for clar in session.pending():
        print(f"{clar.text}")
        for k, option in enumerate(clar.options):
            print(f"  [{k}] {option}")
        picks.append((clar.clarification_index, 0))  # always say yes
        print("  -> choosing [0]")
    session = engine.submit_selections(session.session_id, picks)

session = engine.compose_answer(session.session_id)
answer = session.answer
print(f"\n== Conclusion ==\n{answer.conclusion}")
print(f"\n== Jurisprudential Analysis ==\n{answer.jurisprudential_analysis}")
print(f"\n== Resolution Suggestions ==\n{answer.resolution_suggestions}")
print(f"\ncited: {', '.join(answer.cited_provisions)}")
