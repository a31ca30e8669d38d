"""Operator CLI exposing every pipeline stage:

    ingest  parse a corpus (optionally synthesizing one first) into ground truth
    graph   build or inspect the merged fact-rule graph
    train   fit the missing-node predictor
    eval    recall/precision of the predictor against the oracle
    index   embed and validate a provision database
    serve   run the HTTP API
    ask     interactive (or scripted) terminal session
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import rl
from .detector import TemplateIndex
from .errors import LegalAssistantError
from .graph import FactRuleGraph, KnownNodeSet, merge
from .providers import FixtureReplayModel, StubModel
from .retrieval import ProvisionStore, ReferenceEmbedder
from .service import ServiceConfig, build_engine, load_templates


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return (int(lo), int(hi or lo))


def _provider(mode: str, fixtures: str | None):
    if mode == "fixture":
        return FixtureReplayModel.from_file(fixtures)
    return StubModel()


def cmd_ingest(args) -> int:
    if args.synth:
        synthetic = corpus_mod.generate_synthetic_corpus(
            args.synth, _parse_range(args.facts), _parse_range(args.rules), args.seed
        )
        corpus_mod.write_corpus(synthetic, args.corpus, args.out)
        print(f"synthesized {args.synth} cases -> {args.corpus}, ground truth -> {args.out}")
        return 0
    provider = _provider(args.provider, args.fixtures)
    docs = corpus_mod.read_case_documents(args.corpus)
    cases = []
    for doc in docs:
        frame = corpus_mod.parse_case(doc, provider)
        g = corpus_mod.extract_case_graph(frame)
        question = corpus_mod.summarize_question(frame, g, provider)
        cases.append(
            {
                "id": doc.id,
                "frame": {
                    "issue": frame.issue,
                    "rule": frame.rule,
                    "application": frame.application,
                    "conclusion": frame.conclusion,
                },
                "graph": json.loads(g.to_json()),
                "question": {
                    "question_id": question.question_id,
                    "text": question.text,
                    "key_nodes": sorted(question.key_nodes),
                },
            }
        )
    Path(args.out).write_text(
        json.dumps({"seed": args.seed, "cases": cases}, indent=2, sort_keys=True)
    )
    print(f"ingested {len(cases)} cases -> {args.out}")
    return 0


def _graphs_from_sidecar(path: str) -> list[FactRuleGraph]:
    payload = json.loads(Path(path).read_text())
    return [
        FactRuleGraph.from_json(json.dumps(c["graph"])) for c in payload["cases"]
    ]


def cmd_graph(args) -> int:
    if args.graph_command == "build":
        merged = merge(_graphs_from_sidecar(args.sidecar))
        Path(args.out).write_text(merged.to_json())
        print(f"merged graph: {len(merged.nodes)} nodes, {len(merged.edges)} edges -> {args.out}")
        return 0
    g = FactRuleGraph.from_json(Path(args.graph).read_text())
    print(f"nodes: {len(g.nodes)}")
    print(f"  facts: {len(g.fact_ids())}")
    print(f"  rules: {len(g.rule_ids())}")
    print(f"edges: {len(g.edges)}")
    cases = set()
    for sources in g.provenance.values():
        cases |= sources
    print(f"source cases: {len(cases)}")
    return 0


def _masked_corpus(sidecar: str, fraction: float, seed: int):
    templates = load_templates(sidecar)
    masked = [
        corpus_mod.mask_nodes(q, fraction, seed + i)
        for i, q in enumerate(sorted(templates.templates.values(), key=lambda q: q.question_id))
    ]
    return templates, masked


def cmd_train(args) -> int:
    g = FactRuleGraph.from_json(Path(args.graph).read_text())
    _, masked = _masked_corpus(args.sidecar, args.mask_fraction, args.seed)
    config = rl.TrainConfig(episodes=args.episodes, seed=args.seed, max_steps=args.max_steps)
    result = rl.train(masked, g, config)
    rl.save_checkpoint(result, args.out)
    mean_return = float(np.mean(result.episode_returns)) if result.episode_returns else 0.0
    print(f"trained {args.episodes} episodes, mean return {mean_return:.3f} -> {args.out}")
    return 0


def cmd_eval(args) -> int:
    g = FactRuleGraph.from_json(Path(args.graph).read_text())
    templates, masked = _masked_corpus(args.sidecar, args.mask_fraction, args.seed + 1000)
    result = rl.load_checkpoint(args.checkpoint)
    rng = np.random.default_rng(args.seed)
    rows = []
    for instance in masked[: args.instances]:
        known = KnownNodeSet.of(instance.retained_nodes)
        steps = 2 * len(instance.masked_nodes)
        predicted = rl.predict_missing(g, known, result.theta, result.encoder, steps,
                                       k=result.config.k_hops)
        baseline = rl.random_rollout(g, known, steps, rng, k=result.config.k_hops)
        truth = instance.masked_nodes
        rows.append(
            (
                rl.recall(predicted, truth),
                rl.precision(predicted, truth),
                rl.recall(baseline, truth),
            )
        )
    mean = lambda xs: sum(xs) / len(xs) if xs else 0.0  # noqa: E731
    print(f"{'metric':<22}{'policy':>8}{'random':>8}")
    print(f"{'masked-node recall':<22}{mean([r for r, _, _ in rows]):>8.3f}"
          f"{mean([b for _, _, b in rows]):>8.3f}")
    print(f"{'precision':<22}{mean([p for _, p, _ in rows]):>8.3f}{'':>8}")
    return 0


def cmd_index(args) -> int:
    embedder = ReferenceEmbedder(seed=args.seed)
    store = ProvisionStore.load(args.db, embedder)
    jurisdictions = sorted({p.jurisdiction for p in store.provisions})
    print(f"indexed {len(store.provisions)} provisions "
          f"({embedder.fingerprint}) across {jurisdictions}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = ServiceConfig.from_file(args.config)
    app = create_app(build_engine(config))
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def cmd_ask(args) -> int:
    config = ServiceConfig.from_file(args.config)
    engine = build_engine(config)
    script = json.loads(Path(args.script).read_text()) if args.script else None
    if script:
        question, location = script["question"], script["location"]
    else:
        question = input("Your legal question: ").strip()
        print("Regions:", ", ".join(sorted(engine.regions)))
        location = input("Your region code: ").strip()
    session = engine.open_session(question, location)
    round_index = 0
    while session.state == "clarifying":
        selections = []
        scripted = (
            script["selections"][round_index]
            if script and round_index < len(script.get("selections", []))
            else None
        )
        for i, clar in enumerate(session.pending()):
            print(f"\n{clar.text}")
            for k, option in enumerate(clar.options):
                print(f"  [{k}] {option}")
            if scripted is not None:
                k = scripted[i]
                print(f"selected [{k}]")
            else:
                k = int(input("choose option: ").strip())
            selections.append((clar.clarification_index, k))
        session = engine.submit_selections(session.session_id, selections)
        round_index += 1
    session = engine.compose_answer(session.session_id)
    answer = session.answer
    if session.best_effort:
        print("\n(note: some details remained unresolved; best-effort answer)")
    print("\n=== Conclusion ===\n" + answer.conclusion)
    print("\n=== Jurisprudential Analysis ===\n" + answer.jurisprudential_analysis)
    print("\n=== Resolution Suggestions ===\n" + answer.resolution_suggestions)
    print("\nCited provisions: " + ", ".join(answer.cited_provisions))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="legal-assistant")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a corpus into ground-truth frames/graphs/questions")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--provider", choices=["fixture", "stub"], default="stub")
    p.add_argument("--fixtures")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--synth", type=int, default=0,
                   help="synthesize this many cases instead of reading --corpus")
    p.add_argument("--facts", default="3:6", help="facts per case, LO:HI")
    p.add_argument("--rules", default="1:3", help="rules per case, LO:HI")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("graph", help="build or inspect the merged graph")
    gsub = p.add_subparsers(dest="graph_command", required=True)
    b = gsub.add_parser("build")
    b.add_argument("--sidecar", required=True)
    b.add_argument("--out", required=True)
    s = gsub.add_parser("stats")
    s.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("train", help="train the missing-node predictor")
    p.add_argument("--sidecar", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--episodes", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask-fraction", type=float, default=0.4)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="report predictor recall/precision vs the oracle")
    p.add_argument("--sidecar", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask-fraction", type=float, default=0.4)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("index", help="embed and validate a provision database")
    p.add_argument("--db", required=True)
    p.add_argument("--embedder", choices=["reference"], default="reference")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("ask", help="run a terminal-interactive session")
    p.add_argument("--config", required=True)
    p.add_argument("--script", help="JSON file with question/location/selections")
    p.set_defaults(func=cmd_ask)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except LegalAssistantError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
