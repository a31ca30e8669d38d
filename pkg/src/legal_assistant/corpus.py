"""Case ingestion: IRAC parsing, per-case graph extraction, question summarization,
node masking, and a seeded synthetic-corpus generator with recorded ground truth.

The synthetic generator exists so every downstream component has an offline,
deterministic oracle; real-provider ingestion goes through the same interfaces.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import prompts
from .errors import ArgumentError, EmptyGraphError, ParseError, ProtocolError
from .graph import FACT, RULE, FactRuleGraph, FactRuleNode
from .providers import LanguageModelProvider


@dataclass(frozen=True)
class CaseDocument:
    id: str
    text: str
    jurisdiction: str

    def __post_init__(self):
        if not self.id:
            raise ArgumentError("case id must be non-empty")
        if not self.text:
            raise ArgumentError("case text must be non-empty")


@dataclass(frozen=True)
class IracFrame:
    case_id: str
    issue: str
    rule: str
    application: str
    conclusion: str  # may be empty; the other three sections are mandatory

    def __post_init__(self):
        for name in ("issue", "rule", "application"):
            if not getattr(self, name):
                raise ParseError(f"IRAC section {name!r} is empty", missing_section=name)


@dataclass(frozen=True)
class SummaryQuestion:
    question_id: str
    text: str
    key_nodes: frozenset[str]
    source_case: str

    def __post_init__(self):
        if not self.key_nodes:
            raise ArgumentError("key_nodes must be non-empty")


@dataclass(frozen=True)
class MaskedQuestion:
    base: str  # question_id of the SummaryQuestion this was derived from
    text: str
    masked_nodes: frozenset[str]
    retained_nodes: frozenset[str]
    seed: int

    def __post_init__(self):
        if self.masked_nodes & self.retained_nodes:
            raise ArgumentError("masked and retained node sets overlap")
        if not self.masked_nodes:
            raise ArgumentError("at least one node must be masked")


@dataclass(frozen=True)
class LabeledQuestion:
    text: str
    label: str  # deficient | complete
    missing: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.label not in ("deficient", "complete"):
            raise ArgumentError(f"unknown label {self.label!r}")
        if (self.label == "deficient") != bool(self.missing):
            raise ArgumentError("label must be deficient iff missing is non-empty")


# --- IRAC parsing -----------------------------------------------------------

_MANDATORY_SECTIONS = ("issue", "rule", "application")


def parse_case(doc: CaseDocument, provider: LanguageModelProvider) -> IracFrame:
    """Split a case into its IRAC frame via the provider contract."""
    raw = provider.complete(prompts.parse_case_prompt(doc.text))
    try:
        sections = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"parse_case response is not JSON: {raw[:80]!r}") from exc
    for name in _MANDATORY_SECTIONS:
        if not sections.get(name):
            raise ParseError(
                f"case {doc.id}: missing IRAC section {name!r}", missing_section=name
            )
    return IracFrame(
        case_id=doc.id,
        issue=sections["issue"],
        rule=sections["rule"],
        application=sections["application"],
        conclusion=sections.get("conclusion", ""),
    )


_RULE_RE = re.compile(r"Rule: ([^.]+)\.")
_FACT_RE = re.compile(r"Fact: (.+?) \(under ([^)]+)\)\.")


def extract_case_graph(frame: IracFrame) -> FactRuleGraph:
    """Extract the per-case fact-rule graph from marker sentences.

    Rules come from the RULE section, facts from APPLICATION; a fact's
    "(under ...)" list names the rules it triggers, so every node traces
    to exactly one IRAC section.
    """
    g = FactRuleGraph()
    for m in _RULE_RE.finditer(frame.rule):
        node = FactRuleNode.make(m.group(1).strip(), RULE)
        g.nodes[node.id] = node
        g.provenance[node.id] = {frame.case_id}
    facts_found = False
    for m in _FACT_RE.finditer(frame.application):
        facts_found = True
        node = FactRuleNode.make(m.group(1).strip(), FACT)
        g.nodes[node.id] = node
        g.provenance[node.id] = {frame.case_id}
        for rule_label in m.group(2).split(";"):
            rule_node = FactRuleNode.make(rule_label.strip(), RULE)
            if rule_node.id not in g.nodes:
                g.nodes[rule_node.id] = rule_node
                g.provenance[rule_node.id] = {frame.case_id}
            g.edges.add((node.id, rule_node.id))
    if not facts_found:
        raise EmptyGraphError(f"case {frame.case_id}: no extractable facts")
    return g.validate()


def summarize_question(
    frame: IracFrame, g: FactRuleGraph, provider: LanguageModelProvider
) -> SummaryQuestion:
    """Summarize a case frame into one comprehensive question; its key nodes are
    the fact nodes of the per-case graph."""
    fact_ids = g.fact_ids()
    if not fact_ids:
        raise EmptyGraphError(f"case {frame.case_id}: graph has no fact nodes")
    labels = [g.nodes[i].label for i in fact_ids]
    text = provider.complete(prompts.summarize_prompt(frame.issue, labels))
    return SummaryQuestion(
        question_id=f"q-{frame.case_id}",
        text=text,
        key_nodes=frozenset(fact_ids),
        source_case=frame.case_id,
    )


# --- node masking -----------------------------------------------------------


def _seeded_selection(ids: list[str], n: int, seed: int) -> list[str]:
    """Fisher-Yates shuffle of the sorted ids with a seeded generator; first n win."""
    items = sorted(ids)
    rng = random.Random(seed)
    for i in range(len(items) - 1, 0, -1):
        j = rng.randrange(i + 1)
        items[i], items[j] = items[j], items[i]
    return items[:n]


def _strip_phrase(text: str, phrase: str) -> str:
    pattern = re.compile(
        r"(?:,\s*and\s+|,\s*|\s+and\s+)?" + re.escape(phrase), re.IGNORECASE
    )
    text = pattern.sub("", text)
    text = re.sub(r"\s{2,}", " ", text)
    text = re.sub(r"\s+([,?.])", r"\1", text)
    return text.strip()


def mask_nodes(q: SummaryQuestion, fraction: float, seed: int) -> MaskedQuestion:
    """Mask a seeded subset of the key nodes; the masked text omits their surface forms."""
    if not 0.0 < fraction <= 1.0:
        raise ArgumentError(f"fraction must be in (0, 1], got {fraction}")
    n_mask = max(1, int(fraction * len(q.key_nodes) + 0.5))
    masked = frozenset(_seeded_selection(sorted(q.key_nodes), n_mask, seed))
    text = q.text
    for node_id in sorted(masked):
        text = _strip_phrase(text, node_id)
    return MaskedQuestion(
        base=q.question_id,
        text=text,
        masked_nodes=masked,
        retained_nodes=q.key_nodes - masked,
        seed=seed,
    )


# --- synthetic corpus -------------------------------------------------------

_FACT_SYLLABLES = ["ba", "ce", "di", "fo", "gu", "ha", "ki", "lo", "mu", "ne"]
_RULE_SYLLABLES = ["pra", "ster", "vin", "qual", "zor", "thel", "wix", "crum", "jarn", "plex"]


def _word(index: int, syllables: list[str]) -> str:
    base = len(syllables)
    digits = [index // (base * base) % base, index // base % base, index % base]
    return "".join(syllables[d] for d in digits)


@dataclass(frozen=True)
class SyntheticCase:
    document: CaseDocument
    frame: IracFrame
    graph: FactRuleGraph
    question: SummaryQuestion


@dataclass
class SyntheticCorpus:
    cases: list[SyntheticCase]
    seed: int

    @property
    def graphs(self) -> list[FactRuleGraph]:
        return [c.graph for c in self.cases]

    @property
    def questions(self) -> list[SummaryQuestion]:
        return [c.question for c in self.cases]


_JURISDICTIONS = ("CN-ZJ", "CN-TJ", "US-MA", "US-CA", "DE-BY")


def _question_text(fact_labels: list[str]) -> str:
    if len(fact_labels) == 1:
        listing = fact_labels[0]
    else:
        listing = ", ".join(fact_labels[:-1]) + ", and " + fact_labels[-1]
    return f"What should be done given that {listing}?"


def generate_synthetic_corpus(
    n_cases: int,
    facts_per_case: tuple[int, int],
    rules_per_case: tuple[int, int],
    seed: int,
    share_fact_prob: float = 0.2,
    share_rule_prob: float = 0.4,
) -> SyntheticCorpus:
    """Build a deterministic corpus whose frames, graphs, and questions are
    self-consistent ground truth for every downstream oracle.

    Each case keeps at least one globally unique fact, so no case's key-node
    set is a subset of another's; later facts and rules may be shared across
    cases to exercise graph merging.
    """
    if n_cases < 1:
        raise ArgumentError("n_cases must be >= 1")
    for name, (lo, hi) in (("facts_per_case", facts_per_case), ("rules_per_case", rules_per_case)):
        if lo < 1 or hi < lo:
            raise ArgumentError(f"{name} range ({lo}, {hi}) is empty or invalid")
    rng = random.Random(seed)
    fact_pool: list[str] = []
    rule_pool: list[str] = []
    fact_counter = 0
    rule_counter = 0
    cases = []
    for case_index in range(n_cases):
        case_id = f"case-{seed}-{case_index:04d}"
        jurisdiction = _JURISDICTIONS[case_index % len(_JURISDICTIONS)]
        n_facts = rng.randint(*facts_per_case)
        n_rules = rng.randint(*rules_per_case)

        # the first rule is a case-private hub; later slots may reuse auxiliary
        # doctrines from other cases, which is where graphs overlap on merge
        rules: list[str] = []
        for slot in range(n_rules):
            pooled = [r for r in rule_pool if r not in rules]
            if slot > 0 and pooled and rng.random() < share_rule_prob:
                rules.append(rng.choice(pooled))
            else:
                rules.append(f"{_word(rule_counter, _RULE_SYLLABLES)} doctrine")
                rule_counter += 1
                if slot > 0:
                    rule_pool.append(rules[-1])

        facts: list[str] = []
        for slot in range(n_facts):
            pooled = [f for f in fact_pool if f not in facts]
            if slot > 0 and pooled and rng.random() < share_fact_prob:
                facts.append(rng.choice(pooled))
            else:
                facts.append(
                    f"{_word(2 * fact_counter, _FACT_SYLLABLES)} "
                    f"{_word(2 * fact_counter + 1, _FACT_SYLLABLES)}"
                )
                fact_counter += 1
                fact_pool.append(facts[-1])

        # every fact triggers the case's first (hub) rule; one bridge fact also
        # carries the remaining rules, which is where cross-case links form
        bridge = facts[min(1, len(facts) - 1)]
        fact_rules = {f: [rules[0]] for f in facts}
        fact_rules[bridge] = sorted({rules[0], *rules[1:]})

        issue = f"Case {case_id} concerns a dispute arising in {jurisdiction}."
        rule_text = " ".join(f"Rule: {r}." for r in rules)
        application = " ".join(
            f"Fact: {f} (under {'; '.join(fact_rules[f])})." for f in facts
        )
        conclusion = f"The claim in case {case_id} succeeds on the established facts."
        text = (
            f"ISSUE: {issue}\n"
            f"RULE: {rule_text}\n"
            f"APPLICATION: {application}\n"
            f"CONCLUSION: {conclusion}"
        )
        document = CaseDocument(id=case_id, text=text, jurisdiction=jurisdiction)
        frame = IracFrame(
            case_id=case_id,
            issue=issue,
            rule=rule_text,
            application=application,
            conclusion=conclusion,
        )
        g = FactRuleGraph()
        for r in rules:
            node = FactRuleNode.make(r, RULE)
            g.nodes[node.id] = node
            g.provenance[node.id] = {case_id}
        for f in facts:
            node = FactRuleNode.make(f, FACT)
            g.nodes[node.id] = node
            g.provenance[node.id] = {case_id}
            for r in fact_rules[f]:
                g.edges.add((node.id, FactRuleNode.make(r, RULE).id))
        g.validate()
        question = SummaryQuestion(
            question_id=f"q-{case_id}",
            text=_question_text(sorted(facts)),
            key_nodes=frozenset(FactRuleNode.make(f, FACT).id for f in facts),
            source_case=case_id,
        )
        cases.append(SyntheticCase(document=document, frame=frame, graph=g, question=question))
    return SyntheticCorpus(cases=cases, seed=seed)


# --- corpus files -----------------------------------------------------------


def write_corpus(corpus: SyntheticCorpus, corpus_path: str | Path, sidecar_path: str | Path):
    """Cases as JSON lines; ground truth (frames/graphs/questions) in a sidecar file."""
    with open(corpus_path, "w") as fh:
        for case in corpus.cases:
            doc = case.document
            fh.write(
                json.dumps(
                    {"id": doc.id, "jurisdiction": doc.jurisdiction, "text": doc.text},
                    sort_keys=True,
                )
                + "\n"
            )
    sidecar = {
        "seed": corpus.seed,
        "cases": [
            {
                "id": c.document.id,
                "frame": {
                    "issue": c.frame.issue,
                    "rule": c.frame.rule,
                    "application": c.frame.application,
                    "conclusion": c.frame.conclusion,
                },
                "graph": json.loads(c.graph.to_json()),
                "question": {
                    "question_id": c.question.question_id,
                    "text": c.question.text,
                    "key_nodes": sorted(c.question.key_nodes),
                },
            }
            for c in corpus.cases
        ],
    }
    Path(sidecar_path).write_text(json.dumps(sidecar, indent=2, sort_keys=True))


def read_case_documents(path: str | Path) -> list[CaseDocument]:
    docs = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                item = json.loads(line)
                docs.append(
                    CaseDocument(
                        id=item["id"], text=item["text"], jurisdiction=item["jurisdiction"]
                    )
                )
    ids = [d.id for d in docs]
    if len(set(ids)) != len(ids):
        raise ArgumentError("duplicate case ids in corpus file")
    return docs
