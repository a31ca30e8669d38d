"""Policy and value networks as two-layer perceptrons with hand-derived gradients.

The policy maps the pooled state through an MLP into embedding space and scores
each candidate node by dot product; a softmax over candidates gives the action
distribution. Candidates never include known nodes, so their probability is 0
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoder import State
from .errors import ArgumentError, EnvironmentExhaustedError


@dataclass
class PolicyParams:
    w1: np.ndarray  # (hidden, dim)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (dim, hidden)
    b2: np.ndarray  # (dim,)

    @staticmethod
    def init(dim: int, hidden: int, seed: int) -> "PolicyParams":
        # identity-preserving init: the untrained policy scores candidates by
        # similarity to the pooled state, which training then refines
        rng = np.random.default_rng(seed)
        return PolicyParams(
            w1=2.0 * np.eye(hidden, dim) + rng.normal(0.0, 0.01, (hidden, dim)),
            b1=np.zeros(hidden),
            w2=2.0 * np.eye(dim, hidden) + rng.normal(0.0, 0.01, (dim, hidden)),
            b2=np.zeros(dim),
        )

    @staticmethod
    def zeros(dim: int, hidden: int) -> "PolicyParams":
        return PolicyParams(
            w1=np.zeros((hidden, dim)),
            b1=np.zeros(hidden),
            w2=np.zeros((dim, hidden)),
            b2=np.zeros(dim),
        )

    def copy(self) -> "PolicyParams":
        return PolicyParams(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())


@dataclass
class ValueParams:
    w1: np.ndarray  # (hidden, dim)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float

    @staticmethod
    def init(dim: int, hidden: int, seed: int) -> "ValueParams":
        rng = np.random.default_rng(seed)
        return ValueParams(
            w1=rng.normal(0.0, 1.0 / np.sqrt(dim), (hidden, dim)),
            b1=np.zeros(hidden),
            w2=rng.normal(0.0, 1.0 / np.sqrt(hidden), hidden),
            b2=0.0,
        )

    def copy(self) -> "ValueParams":
        return ValueParams(self.w1.copy(), self.b1.copy(), self.w2.copy(), float(self.b2))


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


def policy_forward(
    theta: PolicyParams,
    state: State,
    candidate_ids: list[str],
    embeddings: dict[str, np.ndarray],
) -> tuple[list[str], np.ndarray]:
    """Distribution over candidates; returned in sorted candidate-id order."""
    if not candidate_ids:
        raise EnvironmentExhaustedError("no candidate actions remain")
    known = state.known.as_set()
    if known & set(candidate_ids):
        raise ArgumentError("candidates must be disjoint from the known set")
    ids = sorted(candidate_ids)
    hidden = np.tanh(theta.w1 @ state.pooled + theta.b1)
    direction = theta.w2 @ hidden + theta.b2
    cand = np.stack([embeddings[i] for i in ids])
    probs = _softmax(cand @ direction)
    return ids, probs


def grad_log_policy(
    theta: PolicyParams,
    state: State,
    candidate_ids: list[str],
    embeddings: dict[str, np.ndarray],
    action_id: str,
) -> PolicyParams:
    """Analytic gradient of log pi(action | state) w.r.t. theta."""
    ids, probs = policy_forward(theta, state, candidate_ids, embeddings)
    action_index = ids.index(action_id)
    cand = np.stack([embeddings[i] for i in ids])
    hidden = np.tanh(theta.w1 @ state.pooled + theta.b1)
    # d log p / d direction = E_a - sum_c p_c E_c
    g_dir = cand[action_index] - probs @ cand
    g_w2 = np.outer(g_dir, hidden)
    g_b2 = g_dir
    g_hidden = theta.w2.T @ g_dir
    g_pre = g_hidden * (1.0 - hidden**2)
    g_w1 = np.outer(g_pre, state.pooled)
    g_b1 = g_pre
    return PolicyParams(w1=g_w1, b1=g_b1, w2=g_w2, b2=g_b2)


def value_forward(phi: ValueParams, state: State) -> float:
    hidden = np.tanh(phi.w1 @ state.pooled + phi.b1)
    return float(phi.w2 @ hidden + phi.b2)


def grad_value(phi: ValueParams, state: State) -> ValueParams:
    """Analytic gradient of V(state) w.r.t. phi."""
    hidden = np.tanh(phi.w1 @ state.pooled + phi.b1)
    g_hidden = phi.w2 * (1.0 - hidden**2)
    return ValueParams(
        w1=np.outer(g_hidden, state.pooled),
        b1=g_hidden,
        w2=hidden,
        b2=1.0,
    )


def apply_policy_step(theta: PolicyParams, grad: PolicyParams, step: float):
    theta.w1 += step * grad.w1
    theta.b1 += step * grad.b1
    theta.w2 += step * grad.w2
    theta.b2 += step * grad.b2


def apply_value_step(phi: ValueParams, grad: ValueParams, step: float):
    phi.w1 += step * grad.w1
    phi.b1 += step * grad.b1
    phi.w2 += step * grad.w2
    phi.b2 += step * grad.b2
