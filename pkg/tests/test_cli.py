import json

import pytest

import legal_assistant as la
from legal_assistant.cli import main
from legal_assistant.corpus import write_corpus

from conftest import write_provision_db


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A synthesized corpus plus every artifact the CLI stages produce."""
    root = tmp_path_factory.mktemp("cli")
    corpus = la.generate_synthetic_corpus(6, (3, 5), (1, 2), seed=11)
    write_corpus(corpus, root / "cases.jsonl", root / "sidecar.json")
    (root / "graph.json").write_text(la.merge(corpus.graphs).to_json())
    write_provision_db(corpus, root / "provisions.jsonl")
    (root / "service.json").write_text(
        json.dumps(
            {
                "graph_path": str(root / "graph.json"),
                "sidecar_path": str(root / "sidecar.json"),
                "provisions_path": str(root / "provisions.jsonl"),
                "provider": "stub",
            }
        )
    )
    return root, corpus


def test_ingest_synth_writes_corpus_and_sidecar(tmp_path, capsys):
    code = main(
        [
            "ingest",
            "--synth", "4",
            "--seed", "3",
            "--corpus", str(tmp_path / "cases.jsonl"),
            "--out", str(tmp_path / "sidecar.json"),
        ]
    )
    assert code == 0
    assert "synthesized 4 cases" in capsys.readouterr().out
    sidecar = json.loads((tmp_path / "sidecar.json").read_text())
    assert len(sidecar["cases"]) == 4


def test_ingest_parse_recovers_ground_truth(workspace, tmp_path, capsys):
    root, _ = workspace
    out = tmp_path / "parsed.json"
    code = main(
        ["ingest", "--corpus", str(root / "cases.jsonl"), "--out", str(out), "--seed", "11"]
    )
    assert code == 0
    parsed = json.loads(out.read_text())
    truth = json.loads((root / "sidecar.json").read_text())
    assert parsed["cases"] == truth["cases"]


def test_graph_build_and_stats(workspace, tmp_path, capsys):
    root, corpus = workspace
    out = tmp_path / "graph.json"
    assert main(["graph", "build", "--sidecar", str(root / "sidecar.json"), "--out", str(out)]) == 0
    assert out.read_text() == (root / "graph.json").read_text()
    capsys.readouterr()
    assert main(["graph", "stats", "--graph", str(out)]) == 0
    stats = capsys.readouterr().out
    merged = la.merge(corpus.graphs)
    assert f"nodes: {len(merged.nodes)}" in stats
    assert f"edges: {len(merged.edges)}" in stats


def test_train_then_eval(workspace, tmp_path, capsys):
    root, _ = workspace
    ckpt = tmp_path / "model.json"
    code = main(
        [
            "train",
            "--sidecar", str(root / "sidecar.json"),
            "--graph", str(root / "graph.json"),
            "--episodes", "10",
            "--out", str(ckpt),
        ]
    )
    assert code == 0
    assert "trained 10 episodes" in capsys.readouterr().out
    code = main(
        [
            "eval",
            "--sidecar", str(root / "sidecar.json"),
            "--graph", str(root / "graph.json"),
            "--checkpoint", str(ckpt),
            "--instances", "5",
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "masked-node recall" in out and "random" in out


def test_index(workspace, capsys):
    root, corpus = workspace
    assert main(["index", "--db", str(root / "provisions.jsonl")]) == 0
    out = capsys.readouterr().out
    assert f"indexed {2 * len(corpus.cases)} provisions" in out


def test_ask_scripted_complete_question(workspace, tmp_path, capsys):
    root, corpus = workspace
    case = corpus.cases[0]
    script = tmp_path / "script.json"
    script.write_text(
        json.dumps(
            {"question": case.question.text, "location": case.document.jurisdiction}
        )
    )
    code = main(["ask", "--config", str(root / "service.json"), "--script", str(script)])
    assert code == 0
    out = capsys.readouterr().out
    assert "=== Conclusion ===" in out
    assert "=== Jurisprudential Analysis ===" in out
    assert "=== Resolution Suggestions ===" in out
    assert "Cited provisions:" in out


def test_ask_scripted_clarification_round(workspace, tmp_path, capsys):
    from legal_assistant.corpus import mask_nodes

    root, corpus = workspace
    case = corpus.cases[0]
    masked = mask_nodes(case.question, 0.3, seed=2)
    script = tmp_path / "script.json"
    script.write_text(
        json.dumps(
            {
                "question": masked.text,
                "location": case.document.jurisdiction,
                "selections": [[0] * len(masked.masked_nodes)],
            }
        )
    )
    code = main(["ask", "--config", str(root / "service.json"), "--script", str(script)])
    assert code == 0
    out = capsys.readouterr().out
    assert "Does your situation involve" in out
    assert "=== Conclusion ===" in out


def test_domain_error_exits_one(workspace, tmp_path, capsys):
    root, _ = workspace
    script = tmp_path / "script.json"
    script.write_text(json.dumps({"question": "q", "location": "XX-YY"}))
    code = main(["ask", "--config", str(root / "service.json"), "--script", str(script)])
    assert code == 1
    assert "unsupported_region" in capsys.readouterr().err


def test_usage_error_exits_two(capsys):
    assert main(["no-such-command"]) == 2
    assert main([]) == 2
