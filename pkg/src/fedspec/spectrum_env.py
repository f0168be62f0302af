"""The multi-agent dynamic spectrum access environment.

N secondary-user (SU) transmitter/receiver pairs share M channels whose
primary-user (PU) occupancy evolves as independent two-state Markov
chains. Each time step every agent either stays idle (action 0) or picks
a channel (actions 1..M). Transmissions on a PU-occupied channel are
blocked and earn zero reward; transmissions on a free channel earn the
normalized Shannon throughput of the link, with co-channel interference
from every other SU transmitting on the same channel measured at the
agent's receiver. Small-scale fading is redrawn independently per
(directed link, channel, step).

Agents never observe PU occupancy or other agents directly; their
observation is their own per-channel throughput history: the running mean
of normalized throughput achieved on each channel this episode, and the
normalized throughput achieved on each channel in the previous step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import NodePosition, noise_power_mw, path_loss_db, sample_rician_power_gain
from .config import ScenarioConfig
from .errors import ConfigError

__all__ = [
    "ScenarioTopology",
    "PuState",
    "Observation",
    "StepOutcome",
    "EpisodeHistory",
    "SpectrumEnv",
    "generate_topology",
    "initial_pu_state",
    "pu_transition",
    "build_observation",
    "normalize_throughput",
]


@dataclass(frozen=True)
class ScenarioTopology:
    """Fixed placement of the N SU pairs; tx[i] transmits to rx[i]."""

    su_tx_positions: tuple[NodePosition, ...]
    su_rx_positions: tuple[NodePosition, ...]

    def __post_init__(self) -> None:
        if len(self.su_tx_positions) != len(self.su_rx_positions):
            raise ValueError("tx and rx position lists must have equal length")
        for tx, rx in zip(self.su_tx_positions, self.su_rx_positions):
            if tx == rx:
                raise ValueError("paired tx/rx positions must be distinct")

    @property
    def n_agents(self) -> int:
        return len(self.su_tx_positions)


@dataclass(frozen=True)
class PuState:
    """Per-channel PU occupancy plus the Markov transition probabilities."""

    occupied: np.ndarray  # bool, shape (M,)
    p_on_to_off: float
    p_off_to_on: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_on_to_off <= 1.0 and 0.0 <= self.p_off_to_on <= 1.0):
            raise ValueError("transition probabilities must be in [0, 1]")


@dataclass(frozen=True)
class Observation:
    """One agent's view of the environment: its own throughput history."""

    avg_hist_throughput: np.ndarray  # shape (M,)
    prev_throughput: np.ndarray  # shape (M,)

    def flatten(self) -> np.ndarray:
        """Concatenate as (avg_hist, prev) into the policy input vector of length 2M."""
        return np.concatenate([self.avg_hist_throughput, self.prev_throughput])


@dataclass(frozen=True)
class StepOutcome:
    """Result of one environment step for all agents."""

    rewards: np.ndarray  # shape (N,), normalized throughput in [0, 1]
    avg_hist_matrix: np.ndarray  # shape (N, M)
    prev_matrix: np.ndarray  # shape (N, M)
    raw_throughput_bps: np.ndarray  # shape (N,), unnormalized Shannon rate
    pu_state_next: PuState

    @property
    def observations(self) -> list[Observation]:
        return [
            Observation(self.avg_hist_matrix[i].copy(), self.prev_matrix[i].copy())
            for i in range(self.avg_hist_matrix.shape[0])
        ]

    def observation_matrix(self) -> np.ndarray:
        """All agents' flattened observations stacked into shape (N, 2M)."""
        return np.hstack([self.avg_hist_matrix, self.prev_matrix])


@dataclass
class EpisodeHistory:
    """Per-agent, per-channel running statistics; reset at episode boundaries.

    Every transmission attempt on a channel (blocked or not) records the
    achieved normalized throughput as a sample for that channel, so a
    frequently busy channel drags its running mean toward zero. Channels
    never attempted this episode read as zero.
    """

    n_agents: int
    n_channels: int
    throughput_sum: np.ndarray = field(init=False)
    attempt_count: np.ndarray = field(init=False)
    prev: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.throughput_sum = np.zeros((self.n_agents, self.n_channels))
        self.attempt_count = np.zeros((self.n_agents, self.n_channels), dtype=np.int64)
        self.prev = np.zeros((self.n_agents, self.n_channels))

    def averages(self) -> np.ndarray:
        """Running mean per (agent, channel); zero where never attempted."""
        out = np.zeros_like(self.throughput_sum)
        np.divide(self.throughput_sum, self.attempt_count, out=out, where=self.attempt_count > 0)
        return out


def generate_topology(config: ScenarioConfig, rng: np.random.Generator) -> ScenarioTopology:
    """Place the SU pairs: tx uniform over the square, rx uniform in a disk
    of radius ``pairing_radius_m`` around its tx, resampled until inside
    the area."""
    if config.pairing_radius_m <= 0:
        raise ConfigError("pairing_radius_m: must be > 0")
    if config.pairing_radius_m >= config.area_side * np.sqrt(2.0):
        raise ConfigError("pairing_radius_m: must be smaller than the area diagonal")
    side = config.area_side
    txs = []
    rxs = []
    for _ in range(config.n_agents):
        tx = NodePosition(rng.uniform(0.0, side), rng.uniform(0.0, side))
        while True:
            radius = config.pairing_radius_m * np.sqrt(rng.random())
            theta = rng.uniform(0.0, 2.0 * np.pi)
            rx = NodePosition(tx.x + radius * np.cos(theta), tx.y + radius * np.sin(theta))
            inside = 0.0 <= rx.x <= side and 0.0 <= rx.y <= side
            if inside and rx != tx:
                break
        txs.append(tx)
        rxs.append(rx)
    return ScenarioTopology(tuple(txs), tuple(rxs))


def initial_pu_state(config: ScenarioConfig, rng: np.random.Generator) -> PuState:
    """Draw each channel's initial occupancy from the stationary distribution."""
    occupied = rng.random(config.n_channels) < config.pu_occupancy
    return PuState(
        occupied=occupied,
        p_on_to_off=config.pu_p_on_to_off,
        p_off_to_on=config.pu_p_off_to_on,
    )


def pu_transition(state: PuState, rng: np.random.Generator) -> PuState:
    """Advance every channel's occupancy chain by one step, independently."""
    u = rng.random(state.occupied.shape[0])
    next_occupied = np.where(state.occupied, u >= state.p_on_to_off, u < state.p_off_to_on)
    return PuState(next_occupied, state.p_on_to_off, state.p_off_to_on)


def build_observation(
    agent: int, history: EpisodeHistory, last_step_throughput: np.ndarray | None = None
) -> Observation:
    """Assemble one agent's observation from its running statistics.

    ``last_step_throughput`` defaults to the history's stored previous-step
    vector for that agent.
    """
    prev = history.prev[agent] if last_step_throughput is None else np.asarray(last_step_throughput, dtype=float)
    avg = history.averages()[agent]
    return Observation(avg, prev.copy())


def normalize_throughput(raw_bps, config: ScenarioConfig):
    """Map raw bits/s into [0, 1] via the spectral-efficiency cap."""
    raw = np.asarray(raw_bps, dtype=float)
    if np.any(raw < 0):
        raise ValueError("throughput must be >= 0")
    out = np.clip(raw / (config.bandwidth_hz * config.spectral_efficiency_cap), 0.0, 1.0)
    return float(out) if np.isscalar(raw_bps) or raw.ndim == 0 else out


class SpectrumEnv:
    """Sequential state machine over one fixed topology.

    Construction precomputes the mean received power of every directed
    tx[j] -> rx[i] link (path loss only); per-step fading multiplies on
    top. One instance serves one run; independent runs should each build
    their own.
    """

    def __init__(self, config: ScenarioConfig, topology: ScenarioTopology):
        if topology.n_agents != config.n_agents:
            raise ValueError(
                f"topology has {topology.n_agents} pairs, config expects {config.n_agents}"
            )
        self.config = config
        self.topology = topology
        n = config.n_agents
        tx_xy = np.array([[p.x, p.y] for p in topology.su_tx_positions])
        rx_xy = np.array([[p.x, p.y] for p in topology.su_rx_positions])
        # dist[j, i]: transmitter j to receiver i.
        diff = tx_xy[:, None, :] - rx_xy[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        if np.any(dist <= 0):
            raise ValueError("a transmitter coincides with a receiver")
        pl = path_loss_db(dist, a_db=config.pathloss_a, b_db=config.pathloss_b)
        self.base_rx_mw = 10.0 ** ((config.tx_power_dbm - pl) / 10.0)
        self.noise_mw = noise_power_mw(config.noise_density_dbm_hz, config.bandwidth_hz)
        self._agent_idx = np.arange(n)

    def new_history(self) -> EpisodeHistory:
        return EpisodeHistory(self.config.n_agents, self.config.n_channels)

    def step(
        self,
        pu: PuState,
        actions,
        history: EpisodeHistory,
        rng: np.random.Generator,
        pu_rng: np.random.Generator | None = None,
    ) -> StepOutcome:
        """Advance the environment one step.

        ``rng`` drives the fading draws; ``pu_rng`` (defaulting to ``rng``)
        drives the PU occupancy transition, so a caller can keep the two
        on separate substreams. The full (M, N, N) fading tensor is drawn
        every step regardless of the actions taken, which keeps stream
        consumption action-independent.
        """
        cfg = self.config
        n, m = cfg.n_agents, cfg.n_channels
        actions = np.asarray(actions, dtype=np.int64)
        if actions.shape != (n,):
            raise ValueError(f"expected {n} actions, got shape {actions.shape}")
        if np.any(actions < 0) or np.any(actions > m):
            raise ValueError(f"actions must be in [0, {m}]")

        fade = sample_rician_power_gain(cfg.rician_k, rng, size=(m, n, n))

        chan = actions - 1  # -1 for idle
        chan_safe = np.maximum(chan, 0)
        attempted = actions > 0
        blocked = attempted & pu.occupied[chan_safe]
        active = attempted & ~blocked

        idx = self._agent_idx
        # fade_links[j, i]: fading on tx j -> rx i over the channel tx j transmits on.
        fade_links = fade[chan_safe[:, None], idx[:, None], idx[None, :]]
        coupled = self.base_rx_mw * fade_links
        same_channel = (chan[:, None] == chan[None, :]) & active[:, None] & active[None, :]
        coupled = np.where(same_channel, coupled, 0.0)

        signal = np.diagonal(coupled).copy()
        interference = coupled.sum(axis=0) - signal
        sinr_vec = signal / (self.noise_mw + interference)
        raw_bps = cfg.bandwidth_hz * np.log1p(sinr_vec) / np.log(2.0)
        rewards = np.clip(raw_bps / (cfg.bandwidth_hz * cfg.spectral_efficiency_cap), 0.0, 1.0)
        rewards[~active] = 0.0
        raw_bps[~active] = 0.0

        rows = idx[attempted]
        cols = chan[attempted]
        history.throughput_sum[rows, cols] += rewards[attempted]
        history.attempt_count[rows, cols] += 1
        prev = np.zeros((n, m))
        prev[rows, cols] = rewards[attempted]
        history.prev = prev

        pu_next = pu_transition(pu, rng if pu_rng is None else pu_rng)
        return StepOutcome(
            rewards=rewards,
            avg_hist_matrix=history.averages(),
            prev_matrix=prev.copy(),
            raw_throughput_bps=raw_bps,
            pu_state_next=pu_next,
        )
