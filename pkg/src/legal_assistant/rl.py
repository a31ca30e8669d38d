"""Actor-critic training for missing-node prediction.

An episode wraps one masked question: the agent starts from the retained nodes
and picks candidate fact nodes one at a time; masked nodes pay +1, misses pay
-0.1, and the episode ends on full recovery or the step cap. Updates use the
per-step advantage r + gamma*V(s') - V(s).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import MaskedQuestion
from .detector import TemplateIndex
from .encoder import EncoderParams, State, encode_nodes, state_of
from .errors import ArgumentError, ConfigError, StateError
from .graph import FactRuleGraph, KnownNodeSet, neighborhood
from .policy import (
    PolicyParams,
    ValueParams,
    apply_policy_step,
    apply_value_step,
    grad_log_policy,
    grad_value,
    policy_forward,
    value_forward,
)

REWARD_HIT = 1.0
REWARD_MISS = -0.1

CHECKPOINT_VERSION = 1


@dataclass
class TrainConfig:
    episodes: int
    seed: int = 0
    gamma: float = 0.95
    lr_actor: float = 1e-3
    lr_critic: float = 1e-2
    dim: int = 64
    hidden: int = 64
    k_hops: int = 2
    max_steps: int | None = None  # default per episode: 2 * |masked set|

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError("gamma must be in [0, 1)")
        if self.max_steps is not None and self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")
        if self.episodes < 0:
            raise ConfigError("episodes must be >= 0")


def advantage(r_t: float, gamma: float, v_t: float, v_next: float) -> float:
    """The per-step advantage r_t + gamma*V(s_{t+1}) - V(s_t)."""
    if not 0.0 <= gamma < 1.0:
        raise ArgumentError("gamma must be in [0, 1)")
    return r_t + gamma * v_next - v_t


@dataclass(frozen=True)
class Transition:
    state: State
    action: str
    reward: float
    next_state: State
    done: bool


def candidate_pool(g: FactRuleGraph, known: frozenset[str], k: int) -> list[str]:
    """Fact nodes within k hops of the known set, minus the known set itself;
    all fact nodes when nothing is known yet."""
    if not known:
        return g.fact_ids()
    sub = neighborhood(g, known, k)
    return [i for i in sub.fact_ids() if i not in known]


class Episode:
    """Environment over one masked question. Embeddings are recomputed whenever
    the known set changes, so the state tracks the current neighborhood."""

    def __init__(
        self,
        g: FactRuleGraph,
        masked: MaskedQuestion,
        encoder: EncoderParams,
        k: int = 2,
        max_steps: int | None = None,
    ):
        self.graph = g
        self.masked = masked
        self.encoder = encoder
        self.k = k
        self.max_steps = max_steps if max_steps is not None else 2 * len(masked.masked_nodes)
        self.known = frozenset(masked.retained_nodes)
        self.found: set[str] = set()
        self.steps = 0
        self.done = False
        self._refresh()

    def _refresh(self):
        focus = KnownNodeSet.of(self.known)
        self.embeddings = encode_nodes(self.graph, self.encoder, focus, self.k)
        self.state = state_of(focus, self.embeddings, self.encoder.dim)

    def candidates(self) -> list[str]:
        return candidate_pool(self.graph, self.known, self.k)

    def step(self, action: str) -> Transition:
        if self.done:
            raise StateError("episode is finished")
        if action in self.known:
            raise ArgumentError(f"action {action!r} is already known")
        previous = self.state
        reward = REWARD_HIT if action in self.masked.masked_nodes else REWARD_MISS
        if action in self.masked.masked_nodes:
            self.found.add(action)
        self.known = self.known | {action}
        self.steps += 1
        self._refresh()
        if self.found == set(self.masked.masked_nodes) or self.steps >= self.max_steps:
            self.done = True
        if not self.done and not self.candidates():
            self.done = True
        return Transition(
            state=previous,
            action=action,
            reward=reward,
            next_state=self.state,
            done=self.done,
        )


def discounted_return(rewards: list[float], gamma: float) -> float:
    return sum(r * gamma**t for t, r in enumerate(rewards))


@dataclass
class TrainResult:
    theta: PolicyParams
    phi: ValueParams
    encoder: EncoderParams
    config: TrainConfig
    episode_returns: list[float] = field(default_factory=list)


def train(
    corpus: list[MaskedQuestion],
    g: FactRuleGraph,
    config: TrainConfig,
    joint_encoder: bool = False,
) -> TrainResult:
    """Episodic advantage actor-critic; deterministic under the config seed.

    The encoder is frozen after seeded initialization (joint_encoder is
    reserved for experimentation and currently just validated).
    """
    if not corpus:
        raise ArgumentError("training corpus is empty")
    if joint_encoder:
        raise ConfigError("joint encoder training is not implemented")
    rng = np.random.default_rng(config.seed)
    encoder = EncoderParams.init(config.dim, config.seed)
    theta = PolicyParams.init(config.dim, config.hidden, config.seed + 1)
    phi = ValueParams.init(config.dim, config.hidden, config.seed + 2)
    returns: list[float] = []
    for _ in range(config.episodes):
        instance = corpus[int(rng.integers(len(corpus)))]
        episode = Episode(g, instance, encoder, k=config.k_hops, max_steps=config.max_steps)
        rewards: list[float] = []
        while not episode.done:
            candidates = episode.candidates()
            if not candidates:
                break
            ids, probs = policy_forward(theta, episode.state, candidates, episode.embeddings)
            action = ids[int(rng.choice(len(ids), p=probs))]
            state = episode.state
            embeddings = episode.embeddings
            v_t = value_forward(phi, state)
            transition = episode.step(action)
            v_next = 0.0 if transition.done else value_forward(phi, transition.next_state)
            delta = advantage(transition.reward, config.gamma, v_t, v_next)
            if not np.isfinite(delta):
                raise ArgumentError("training diverged: non-finite advantage")
            g_theta = grad_log_policy(theta, state, candidates, embeddings, action)
            apply_policy_step(theta, g_theta, config.lr_actor * delta)
            g_phi = grad_value(phi, state)
            apply_value_step(phi, g_phi, config.lr_critic * delta)
            rewards.append(transition.reward)
        returns.append(discounted_return(rewards, config.gamma))
    return TrainResult(
        theta=theta, phi=phi, encoder=encoder, config=config, episode_returns=returns
    )


def predict_missing(
    g: FactRuleGraph,
    known: KnownNodeSet,
    theta: PolicyParams,
    encoder: EncoderParams,
    max_steps: int,
    k: int = 2,
) -> list[str]:
    """Greedy rollout: argmax of the policy at each step, up to max_steps picks."""
    current = frozenset(known.ids)
    picks: list[str] = []
    for _ in range(max_steps):
        candidates = candidate_pool(g, current, k)
        if not candidates:
            break
        focus = KnownNodeSet.of(current)
        embeddings = encode_nodes(g, encoder, focus, k)
        state = state_of(focus, embeddings, encoder.dim)
        ids, probs = policy_forward(theta, state, candidates, embeddings)
        best = ids[int(np.argmax(probs))]
        picks.append(best)
        current = current | {best}
    return picks


def random_rollout(
    g: FactRuleGraph,
    known: KnownNodeSet,
    max_steps: int,
    rng: np.random.Generator,
    k: int = 2,
) -> list[str]:
    """Uniform-random baseline used when reporting learning gains."""
    current = frozenset(known.ids)
    picks: list[str] = []
    for _ in range(max_steps):
        candidates = sorted(candidate_pool(g, current, k))
        if not candidates:
            break
        pick = candidates[int(rng.integers(len(candidates)))]
        picks.append(pick)
        current = current | {pick}
    return picks


def oracle_missing(
    templates: TemplateIndex,
    known: KnownNodeSet,
    template_id: str | None = None,
) -> frozenset[str]:
    """Ground-truth missing set: the template's key nodes not yet known.

    The template is matched by overlap with the known set; pass template_id to
    pin it explicitly (required when the known set is empty, since matching
    needs at least one shared node).
    """
    if template_id is not None:
        if template_id not in templates.templates:
            raise ArgumentError(f"unknown template {template_id!r}")
        template = templates.templates[template_id]
    else:
        template = templates.nearest(known)
    return frozenset(template.key_nodes - known.as_set())


def recall(predicted: list[str], truth: frozenset[str]) -> float:
    if not truth:
        return 1.0
    return len(set(predicted) & truth) / len(truth)


def precision(predicted: list[str], truth: frozenset[str]) -> float:
    if not predicted:
        return 0.0
    return len(set(predicted) & truth) / len(predicted)


# --- checkpoints ------------------------------------------------------------


def save_checkpoint(result: TrainResult, path: str | Path):
    cfg = result.config
    payload = {
        "version": CHECKPOINT_VERSION,
        "config": {
            "episodes": cfg.episodes,
            "seed": cfg.seed,
            "gamma": cfg.gamma,
            "lr_actor": cfg.lr_actor,
            "lr_critic": cfg.lr_critic,
            "dim": cfg.dim,
            "hidden": cfg.hidden,
            "k_hops": cfg.k_hops,
            "max_steps": cfg.max_steps,
        },
        "encoder": {
            "dim": result.encoder.dim,
            "w_self": [w.tolist() for w in result.encoder.w_self],
            "w_neigh": [w.tolist() for w in result.encoder.w_neigh],
            "bias": [b.tolist() for b in result.encoder.bias],
        },
        "theta": {
            "w1": result.theta.w1.tolist(),
            "b1": result.theta.b1.tolist(),
            "w2": result.theta.w2.tolist(),
            "b2": result.theta.b2.tolist(),
        },
        "phi": {
            "w1": result.phi.w1.tolist(),
            "b1": result.phi.b1.tolist(),
            "w2": result.phi.w2.tolist(),
            "b2": result.phi.b2,
        },
        "episode_returns": result.episode_returns,
    }
    Path(path).write_text(json.dumps(payload))


def load_checkpoint(path: str | Path) -> TrainResult:
    payload = json.loads(Path(path).read_text())
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {payload.get('version')!r}")
    config = TrainConfig(**payload["config"])
    encoder = EncoderParams(
        dim=payload["encoder"]["dim"],
        w_self=[np.array(w) for w in payload["encoder"]["w_self"]],
        w_neigh=[np.array(w) for w in payload["encoder"]["w_neigh"]],
        bias=[np.array(b) for b in payload["encoder"]["bias"]],
    ).check()
    theta = PolicyParams(
        w1=np.array(payload["theta"]["w1"]),
        b1=np.array(payload["theta"]["b1"]),
        w2=np.array(payload["theta"]["w2"]),
        b2=np.array(payload["theta"]["b2"]),
    )
    phi = ValueParams(
        w1=np.array(payload["phi"]["w1"]),
        b1=np.array(payload["phi"]["b1"]),
        w2=np.array(payload["phi"]["w2"]),
        b2=float(payload["phi"]["b2"]),
    )
    return TrainResult(
        theta=theta,
        phi=phi,
        encoder=encoder,
        config=config,
        episode_returns=list(payload.get("episode_returns", [])),
    )
