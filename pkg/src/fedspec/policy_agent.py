"""The per-agent learner: a two-layer softmax policy trained by REINFORCE.

The policy maps the 2M-dimensional throughput-history observation through
one tanh hidden layer to a distribution over the M+1 actions (idle or one
of M channels). Gradients are computed by explicit backpropagation for
this fixed architecture — the model is tiny and the closed form keeps the
whole update finite-difference checkable. Everything runs in double
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "PolicyParams",
    "GradientVector",
    "Trajectory",
    "init_params",
    "forward",
    "sample_action",
    "discounted_returns",
    "surrogate_loss",
    "policy_gradient",
    "sgd_update",
]


@dataclass(frozen=True)
class PolicyParams:
    """Weights of the two-layer policy network.

    Shapes: w1 (H, D), b1 (H,), w2 (A, H), b2 (A,) for input dimension D,
    hidden width H and A actions.
    """

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __post_init__(self) -> None:
        h, d = self.w1.shape
        a = self.w2.shape[0]
        if self.b1.shape != (h,) or self.w2.shape != (a, h) or self.b2.shape != (a,):
            raise ValueError("inconsistent parameter shapes")

    @property
    def dims(self) -> tuple[int, int, int]:
        """(input dim D, hidden width H, action count A)."""
        h, d = self.w1.shape
        return d, h, self.w2.shape[0]

    def copy(self) -> "PolicyParams":
        return PolicyParams(self.w1.copy(), self.b1.copy(), self.w2.copy(), self.b2.copy())

    def flatten(self) -> np.ndarray:
        """Pack as one vector in (w1, b1, w2, b2) order; exact inverse of unflatten."""
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(), self.b2])

    @classmethod
    def unflatten(cls, vec: np.ndarray, dims: tuple[int, int, int]) -> "PolicyParams":
        d, h, a = dims
        sizes = [h * d, h, a * h, a]
        if vec.shape != (sum(sizes),):
            raise ValueError(f"expected flat vector of length {sum(sizes)}, got {vec.shape}")
        parts = np.split(np.asarray(vec, dtype=float), np.cumsum(sizes)[:-1])
        return cls(parts[0].reshape(h, d), parts[1], parts[2].reshape(a, h), parts[3])


# A gradient has exactly the shape of the parameters it differentiates.
GradientVector = PolicyParams


@dataclass(frozen=True)
class Trajectory:
    """One episode of experience for one agent."""

    observations: np.ndarray  # shape (T, D)
    actions: np.ndarray  # shape (T,), int action codes
    rewards: np.ndarray  # shape (T,), normalized throughput

    def __post_init__(self) -> None:
        t = self.observations.shape[0]
        if self.actions.shape != (t,) or self.rewards.shape != (t,):
            raise ValueError("observations, actions, rewards must share length")

    def __len__(self) -> int:
        return self.observations.shape[0]


def init_params(dims: tuple[int, int, int], rng: np.random.Generator) -> PolicyParams:
    """Fresh parameters: weights uniform in +-1/sqrt(fan_in), biases zero."""
    d, h, a = dims
    if d < 1 or h < 1 or a < 1:
        raise ConfigError(f"network dimensions must be >= 1, got {dims}")
    lim1 = 1.0 / math.sqrt(d)
    lim2 = 1.0 / math.sqrt(h)
    return PolicyParams(
        w1=rng.uniform(-lim1, lim1, size=(h, d)),
        b1=np.zeros(h),
        w2=rng.uniform(-lim2, lim2, size=(a, h)),
        b2=np.zeros(a),
    )


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _forward_many(params: PolicyParams, obs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hidden activations and action probabilities for a (T, D) batch."""
    hidden = np.tanh(obs @ params.w1.T + params.b1)
    probs = _softmax_rows(hidden @ params.w2.T + params.b2)
    assert np.all(np.isfinite(probs)), "policy produced non-finite probabilities"
    return hidden, probs


def forward(params: PolicyParams, obs: np.ndarray) -> np.ndarray:
    """Action probabilities ``softmax(w2 tanh(w1 obs + b1) + b2)``."""
    obs = np.asarray(obs, dtype=float)
    d = params.dims[0]
    if obs.shape != (d,):
        raise ValueError(f"expected observation of shape ({d},), got {obs.shape}")
    _, probs = _forward_many(params, obs[None, :])
    return probs[0]


def sample_action(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one action index from a categorical distribution."""
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise ValueError("probs must be a non-empty vector")
    if np.any(probs < 0) or not np.isfinite(probs).all() or abs(probs.sum() - 1.0) > 1e-6:
        raise ValueError("probs must be non-negative and sum to 1")
    cum = np.cumsum(probs)
    code = int(np.searchsorted(cum, rng.random(), side="right"))
    return min(code, probs.size - 1)


def discounted_returns(rewards, gamma: float) -> np.ndarray:
    """Suffix-discounted returns G_t, by reverse recursion G_t = r_t + gamma G_{t+1}."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must be in [0, 1]")
    rewards = np.asarray(rewards, dtype=float)
    returns = np.empty_like(rewards)
    acc = 0.0
    for t in range(rewards.shape[0] - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        returns[t] = acc
    return returns


def _advantages(traj: Trajectory, gamma: float, baseline: bool) -> np.ndarray:
    returns = discounted_returns(traj.rewards, gamma)
    if baseline:
        returns = returns - returns.mean()
    return returns


def surrogate_loss(
    params: PolicyParams, traj: Trajectory, gamma: float, baseline: bool = True
) -> float:
    """The scalar REINFORCE loss ``-sum_t log pi(a_t|s_t) (G_t - b)``.

    ``policy_gradient`` returns the analytic gradient of exactly this
    function, so the two can be cross-checked by finite differences.
    """
    if len(traj) == 0:
        raise ValueError("trajectory must be non-empty")
    adv = _advantages(traj, gamma, baseline)
    _, probs = _forward_many(params, traj.observations)
    logp = np.log(probs[np.arange(len(traj)), traj.actions])
    return float(-(adv * logp).sum())


def policy_gradient(
    params: PolicyParams, traj: Trajectory, gamma: float, baseline: bool = True
) -> GradientVector:
    """Gradient of the surrogate loss w.r.t. the parameters.

    A plain descent step on this gradient ascends expected return. The
    optional baseline subtracts the trajectory mean of the returns from
    every G_t for variance reduction; it leaves the gradient unbiased
    because it does not depend on the parameters.
    """
    if len(traj) == 0:
        raise ValueError("trajectory must be non-empty")
    obs = np.asarray(traj.observations, dtype=float)
    d = params.dims[0]
    if obs.shape[1] != d:
        raise ValueError(f"trajectory observations have dim {obs.shape[1]}, expected {d}")
    adv = _advantages(traj, gamma, baseline)

    hidden, probs = _forward_many(params, obs)
    # d(-adv_t * log pi(a_t))/d logits_t = adv_t * (probs_t - onehot(a_t))
    dlogits = probs.copy()
    dlogits[np.arange(len(traj)), traj.actions] -= 1.0
    dlogits *= adv[:, None]

    gw2 = dlogits.T @ hidden
    gb2 = dlogits.sum(axis=0)
    dhidden = dlogits @ params.w2
    dpre = dhidden * (1.0 - hidden * hidden)
    gw1 = dpre.T @ obs
    gb1 = dpre.sum(axis=0)
    return PolicyParams(gw1, gb1, gw2, gb2)


def sgd_update(params: PolicyParams, grad: GradientVector, lr: float) -> PolicyParams:
    """One plain gradient-descent step: ``params - lr * grad``."""
    if lr <= 0:
        raise ValueError("learning rate must be > 0")
    if params.dims != grad.dims:
        raise ValueError(f"shape mismatch: params {params.dims} vs grad {grad.dims}")
    return PolicyParams(
        params.w1 - lr * grad.w1,
        params.b1 - lr * grad.b1,
        params.w2 - lr * grad.w2,
        params.b2 - lr * grad.b2,
    )
