"""Scenario configuration: the single source of truth for a run.

A :class:`ScenarioConfig` carries every simulation parameter — the radio
layer, the primary-user occupancy chain, the learner hyperparameters, and
the federation schedule — so that an entire experiment is a pure function
of one config value. Configs load from flat JSON documents whose keys are
exactly the dataclass field names; missing keys take the defaults below
and unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

__all__ = ["ScenarioConfig", "load_config"]

MODES = ("fl", "dl")

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ScenarioConfig:
    """All parameters of one simulated experiment.

    Defaults reproduce the reference scenario: 8 secondary-user pairs in a
    400 m x 400 m area contending for 4 channels of 10 MHz each, trained
    for 50-step episodes with per-episode policy-gradient updates and, in
    ``fl`` mode, parameter averaging every 4th episode.
    """

    n_agents: int = 8
    n_channels: int = 4
    area_side: float = 400.0
    bandwidth_hz: float = 10e6
    pu_occupancy: float = 0.2
    pu_p_off_to_on: float = 0.05
    pu_p_on_to_off: float = 0.2
    pathloss_a: float = 41.0
    pathloss_b: float = 22.7
    rician_k: float = 5.0
    noise_density_dbm_hz: float = -174.0
    tx_power_dbm: float = 23.0
    pairing_radius_m: float = 100.0
    episodes: int = 50000
    steps_per_episode: int = 50
    learning_rate: float = 0.01
    gamma: float = 0.9
    hidden_width: int = 32
    aggregation_period_episodes: int = 4
    # None means full participation; resolved to n_agents on construction.
    participants_u: int | None = None
    mode: str = "fl"
    seed: int = 0
    baseline_enabled: bool = True
    spectral_efficiency_cap: float = 10.0

    def __post_init__(self) -> None:
        if self.participants_u is None:
            object.__setattr__(self, "participants_u", self.n_agents)

    # Derived dimensions of the policy network.
    @property
    def obs_dim(self) -> int:
        return 2 * self.n_channels

    @property
    def n_actions(self) -> int:
        return self.n_channels + 1

    def stationary_occupancy(self) -> float:
        """Long-run per-channel busy fraction implied by the transition probabilities."""
        denom = self.pu_p_off_to_on + self.pu_p_on_to_off
        if denom <= 0:
            raise ConfigError(
                "pu_p_off_to_on: transition probabilities cannot both be zero "
                "(stationary occupancy undefined)"
            )
        return self.pu_p_off_to_on / denom

    def validate(self) -> "ScenarioConfig":
        """Check every invariant; raises ConfigError naming the offending key."""
        _require(self.n_agents >= 1, "n_agents", "must be >= 1")
        _require(self.n_channels >= 1, "n_channels", "must be >= 1")
        _require(self.area_side > 0, "area_side", "must be > 0")
        _require(self.bandwidth_hz > 0, "bandwidth_hz", "must be > 0")
        _require(0.0 <= self.pu_occupancy <= 1.0, "pu_occupancy", "must be in [0, 1]")
        _require(0.0 <= self.pu_p_off_to_on <= 1.0, "pu_p_off_to_on", "must be in [0, 1]")
        _require(0.0 <= self.pu_p_on_to_off <= 1.0, "pu_p_on_to_off", "must be in [0, 1]")
        stationary = self.stationary_occupancy()
        _require(
            abs(stationary - self.pu_occupancy) <= 1e-9,
            "pu_occupancy",
            f"transition probabilities imply stationary occupancy {stationary!r}, "
            f"which does not match pu_occupancy={self.pu_occupancy!r}",
        )
        _require(self.rician_k >= 0, "rician_k", "must be >= 0")
        _require(self.pairing_radius_m > 0, "pairing_radius_m", "must be > 0")
        _require(
            self.pairing_radius_m < self.area_side * math.sqrt(2.0),
            "pairing_radius_m",
            "must be smaller than the area diagonal",
        )
        _require(self.episodes >= 0, "episodes", "must be >= 0")
        _require(self.steps_per_episode >= 1, "steps_per_episode", "must be >= 1")
        _require(self.learning_rate > 0, "learning_rate", "must be > 0")
        _require(0.0 <= self.gamma <= 1.0, "gamma", "must be in [0, 1]")
        _require(self.hidden_width >= 1, "hidden_width", "must be >= 1")
        _require(
            self.aggregation_period_episodes >= 1,
            "aggregation_period_episodes",
            "must be >= 1",
        )
        _require(
            1 <= self.participants_u <= self.n_agents,
            "participants_u",
            f"must be in [1, n_agents={self.n_agents}]",
        )
        _require(self.mode in MODES, "mode", f"must be one of {MODES}")
        _require(0 <= self.seed <= _MAX_SEED, "seed", "must be an unsigned 64-bit integer")
        _require(
            self.spectral_efficiency_cap > 0,
            "spectral_efficiency_cap",
            "must be > 0",
        )
        for name in (
            "area_side",
            "bandwidth_hz",
            "pathloss_a",
            "pathloss_b",
            "noise_density_dbm_hz",
            "tx_power_dbm",
            "pairing_radius_m",
            "learning_rate",
            "spectral_efficiency_cap",
        ):
            _require(math.isfinite(getattr(self, name)), name, "must be finite")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"{key}: {message}")


def _coerce(key: str, value, target_type):
    """Check a JSON value against the declared field type (int/float/str/bool)."""
    if target_type is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{key}: expected a boolean, got {value!r}")
        return value
    if target_type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if target_type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        return float(value)
    if target_type is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{key}: unsupported field type {target_type!r}")  # pragma: no cover


def load_config(path) -> ScenarioConfig:
    """Load and validate a ScenarioConfig from a flat JSON file.

    Missing keys take the defaults; unknown keys are an error. Raises
    ConfigError naming the offending key on any problem.
    """
    path = Path(path)
    try:
        raw = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root must be a JSON object, got {type(data).__name__}")
    return config_from_dict(data)


def config_from_dict(data: dict) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a flat dict of overrides."""
    fields = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
    types = {"int": int, "float": float, "str": str, "bool": bool, "int | None": int}
    known = {}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown config key: {key!r}")
        known[key] = _coerce(key, value, types[fields[key]])
    return ScenarioConfig(**known).validate()
