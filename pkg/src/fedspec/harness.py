"""Experiment orchestration: seeded streams and the FL-vs-DL training loop.

A run is a pure function of its :class:`ScenarioConfig`. All randomness
derives from the config seed through independent labeled substreams
(topology, PU chain, fading, one action stream per agent, initialization,
participant selection), so instrumentation or reordering of unrelated
draws can never perturb the simulation.
"""

from __future__ import annotations

import hashlib
from typing import Callable, Iterator

import numpy as np

from .config import ScenarioConfig
from .federation import GlobalModel, RoundPlan, dl_baseline_init, fl_round, select_participants
from .metrics import MetricsRecord
from .policy_agent import PolicyParams, Trajectory, init_params, policy_gradient, sgd_update
from .spectrum_env import SpectrumEnv, generate_topology, initial_pu_state

__all__ = ["rng_fork", "run_experiment"]

OnRoundHook = Callable[[RoundPlan, GlobalModel], None]
OnEpisodeEndHook = Callable[[int, list[PolicyParams]], None]


def rng_fork(master_seed: int, stream_label: str) -> np.random.Generator:
    """Derive an independent deterministic random stream for one purpose.

    The child seed is a hash of (master seed, label), so streams are
    stateless: the same pair always yields the same stream, and forking
    order is irrelevant.
    """
    digest = hashlib.sha256(f"{master_seed}/{stream_label}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:16], "big"))


class _StackedPolicies:
    """All agents' parameters stacked for one batched forward per step.

    Matches :func:`fedspec.policy_agent.forward` row by row (up to float
    reduction order); rebuild after any parameter change.
    """

    def __init__(self, agents: list[PolicyParams]):
        self.w1 = np.stack([a.w1 for a in agents])
        self.b1 = np.stack([a.b1 for a in agents])
        self.w2 = np.stack([a.w2 for a in agents])
        self.b2 = np.stack([a.b2 for a in agents])

    def probabilities(self, obs: np.ndarray) -> np.ndarray:
        hidden = np.tanh(np.einsum("nhd,nd->nh", self.w1, obs) + self.b1)
        logits = np.einsum("nah,nh->na", self.w2, hidden) + self.b2
        shifted = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        probs = e / e.sum(axis=1, keepdims=True)
        assert np.all(np.isfinite(probs)), "policy produced non-finite probabilities"
        return probs


def _sample_actions(probs: np.ndarray, rngs: list[np.random.Generator]) -> np.ndarray:
    """Inverse-CDF categorical draw per agent, one uniform from each
    agent's own stream, in agent-index order. Identical decision rule to
    :func:`fedspec.policy_agent.sample_action`."""
    u = np.array([rng.random() for rng in rngs])
    cum = np.cumsum(probs, axis=1)
    codes = (cum <= u[:, None]).sum(axis=1)
    return np.minimum(codes, probs.shape[1] - 1)


def run_experiment(
    config: ScenarioConfig,
    on_round: OnRoundHook | None = None,
    on_episode_end: OnEpisodeEndHook | None = None,
) -> Iterator[MetricsRecord]:
    """Run the full training loop, yielding one record per agent per episode.

    Per episode: reset histories, roll ``steps_per_episode`` environment
    steps with all agents acting simultaneously, apply each agent's
    policy-gradient update, and in "fl" mode run an aggregation round
    every ``aggregation_period_episodes`` episodes. "dl" mode never
    aggregates. The optional hooks observe rounds and per-episode agent
    states; they receive live objects and must not mutate them.
    """
    config.validate()
    return _run(config, on_round, on_episode_end)


def _run(
    config: ScenarioConfig,
    on_round: OnRoundHook | None,
    on_episode_end: OnEpisodeEndHook | None,
) -> Iterator[MetricsRecord]:
    n = config.n_agents
    t_steps = config.steps_per_episode
    dims = (config.obs_dim, config.hidden_width, config.n_actions)

    topology_rng = rng_fork(config.seed, "topology")
    pu_rng = rng_fork(config.seed, "pu")
    fading_rng = rng_fork(config.seed, "fading")
    init_rng = rng_fork(config.seed, "init")
    selection_rng = rng_fork(config.seed, "selection")
    action_rngs = [rng_fork(config.seed, f"action:{i}") for i in range(n)]

    env = SpectrumEnv(config, generate_topology(config, topology_rng))
    # Both modes begin with the same broadcast of one initialized model.
    agents = dl_baseline_init(init_params_for(config, init_rng), n)
    pu = initial_pu_state(config, pu_rng)
    round_index = 0

    for episode in range(config.episodes):
        history = env.new_history()
        stacked = _StackedPolicies(agents)
        obs_mat = np.zeros((n, config.obs_dim))
        obs_buf = np.empty((n, t_steps, config.obs_dim))
        act_buf = np.empty((n, t_steps), dtype=np.int64)
        rew_buf = np.empty((n, t_steps))

        for t in range(t_steps):
            probs = stacked.probabilities(obs_mat)
            actions = _sample_actions(probs, action_rngs)
            outcome = env.step(pu, actions, history, fading_rng, pu_rng=pu_rng)
            obs_buf[:, t, :] = obs_mat
            act_buf[:, t] = actions
            rew_buf[:, t] = outcome.rewards
            obs_mat = outcome.observation_matrix()
            pu = outcome.pu_state_next

        for i in range(n):
            traj = Trajectory(obs_buf[i], act_buf[i], rew_buf[i])
            grad = policy_gradient(agents[i], traj, config.gamma, baseline=config.baseline_enabled)
            agents[i] = sgd_update(agents[i], grad, config.learning_rate)

        if config.mode == "fl" and (episode + 1) % config.aggregation_period_episodes == 0:
            plan = select_participants(n, config.participants_u, selection_rng, round_index)
            global_model, agents = fl_round(agents, plan)
            round_index += 1
            if on_round is not None:
                on_round(plan, global_model)
        if on_episode_end is not None:
            on_episode_end(episode, agents)

        episode_rewards = rew_buf.sum(axis=1)
        joint = float(episode_rewards.sum())
        avg = joint / n
        for i in range(n):
            yield MetricsRecord(
                mode=config.mode,
                seed=config.seed,
                episode=episode,
                agent_id=i,
                episode_reward=float(episode_rewards[i]),
                avg_user_reward=avg,
                joint_reward=joint,
            )


def init_params_for(config: ScenarioConfig, rng: np.random.Generator) -> PolicyParams:
    """Initialize a policy network with the dimensions the config implies."""
    return init_params((config.obs_dim, config.hidden_width, config.n_actions), rng)
