"""Deterministic simulator of federated multi-agent RL for dynamic spectrum access."""

from .channel import (
    LinkBudget,
    NodePosition,
    noise_power_mw,
    path_loss_db,
    received_power_mw,
    sample_rician_power_gain,
    sinr,
    throughput_bps,
)
from .config import ScenarioConfig, load_config
from .errors import ConfigError
from .federation import (
    GlobalModel,
    RoundPlan,
    aggregate,
    dl_baseline_init,
    fl_round,
    select_participants,
)
from .harness import rng_fork, run_experiment
from .metrics import CSV_HEADER, MetricsRecord, read_csv, write_csv
from .policy_agent import (
    GradientVector,
    PolicyParams,
    Trajectory,
    discounted_returns,
    forward,
    init_params,
    policy_gradient,
    sample_action,
    sgd_update,
    surrogate_loss,
)
from .spectrum_env import (
    EpisodeHistory,
    Observation,
    PuState,
    ScenarioTopology,
    SpectrumEnv,
    StepOutcome,
    build_observation,
    generate_topology,
    initial_pu_state,
    normalize_throughput,
    pu_transition,
)

__version__ = "0.1.0"
