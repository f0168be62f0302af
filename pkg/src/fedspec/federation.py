"""Server-side federation: participant selection, averaging, redistribution.

Each aggregation round draws a uniform subset of agents, replaces the
global model with the unweighted mean of the participants' parameters,
and sends that global model back to the participants only. Agents outside
the round keep their local parameters untouched. The non-cooperative
baseline ("dl" mode) consists of the initial broadcast and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .policy_agent import PolicyParams

__all__ = [
    "RoundPlan",
    "GlobalModel",
    "select_participants",
    "aggregate",
    "fl_round",
    "dl_baseline_init",
]


@dataclass(frozen=True)
class RoundPlan:
    """Which agents take part in one aggregation round."""

    round_index: int
    participants: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.participants)) != len(self.participants):
            raise ValueError("participants must be distinct")
        if len(self.participants) == 0:
            raise ValueError("a round needs at least one participant")


@dataclass(frozen=True)
class GlobalModel:
    params: PolicyParams
    round_index: int


def select_participants(
    n_agents: int, u: int, rng: np.random.Generator, round_index: int = 0
) -> RoundPlan:
    """Uniformly draw ``u`` distinct agent indices out of ``n_agents``."""
    if not 1 <= u <= n_agents:
        raise ConfigError(f"participants_u: must be in [1, n_agents={n_agents}], got {u}")
    chosen = rng.choice(n_agents, size=u, replace=False)
    return RoundPlan(round_index=round_index, participants=tuple(sorted(int(i) for i in chosen)))


def aggregate(models: list[PolicyParams]) -> PolicyParams:
    """Elementwise unweighted mean of the given parameter sets.

    Every agent contributes the same number of steps per episode, so the
    mean is equally weighted. Summands are sorted per coordinate before
    averaging, which makes the result bit-identical under any permutation
    of the input list.
    """
    if not models:
        raise ValueError("cannot aggregate an empty model list")
    dims = models[0].dims
    if any(m.dims != dims for m in models):
        raise ValueError("cannot aggregate models of differing shapes")

    def mean_of(attr: str) -> np.ndarray:
        stacked = np.stack([getattr(m, attr) for m in models])
        return np.sort(stacked, axis=0).mean(axis=0)

    return PolicyParams(mean_of("w1"), mean_of("b1"), mean_of("w2"), mean_of("b2"))


def fl_round(
    agents: list[PolicyParams], plan: RoundPlan
) -> tuple[GlobalModel, list[PolicyParams]]:
    """Run one synchronous round: aggregate the participants, send the
    global model back to them, leave everyone else untouched."""
    for i in plan.participants:
        if not 0 <= i < len(agents):
            raise ValueError(f"participant index {i} out of range for {len(agents)} agents")
    global_params = aggregate([agents[i] for i in plan.participants])
    updated = list(agents)
    for i in plan.participants:
        updated[i] = global_params.copy()
    return GlobalModel(global_params, plan.round_index), updated


def dl_baseline_init(global_params: PolicyParams, n_agents: int) -> list[PolicyParams]:
    """The initial broadcast: every agent starts from its own copy of the
    global model. In "dl" mode this is the only communication that ever
    happens."""
    if n_agents < 1:
        raise ValueError("n_agents must be >= 1")
    return [global_params.copy() for _ in range(n_agents)]
