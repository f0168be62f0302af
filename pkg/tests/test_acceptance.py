"""Acceptance suite: one test per criterion, one [PASS]/[FAIL] line each.

The two ordering criteria share a session-scoped batch of full experiment
runs (episodes=5000, three seeds), executed in parallel worker processes.
Run with ``pytest tests/test_acceptance.py -s`` to see the report lines.
"""

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest
from scipy.stats import spearmanr

from fedspec.channel import sample_rician_power_gain
from fedspec.config import ScenarioConfig
from fedspec.federation import RoundPlan, aggregate, fl_round
from fedspec.harness import rng_fork, run_experiment
from fedspec.metrics import write_csv
from fedspec.policy_agent import PolicyParams, Trajectory, init_params, policy_gradient, surrogate_loss
from fedspec.spectrum_env import (
    PuState,
    SpectrumEnv,
    generate_topology,
    initial_pu_state,
    pu_transition,
)

SEEDS = (1, 2, 3)
EPISODES = 5000
TRAILING = 500


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def trailing_mean_of_run(args):
    mode, participants_u, seed = args
    config = ScenarioConfig(
        episodes=EPISODES, mode=mode, participants_u=participants_u, seed=seed
    ).validate()
    per_episode = np.empty(config.episodes)
    for record in run_experiment(config):
        if record.agent_id == 0:
            per_episode[record.episode] = record.avg_user_reward
    return (mode, participants_u, seed), float(per_episode[-TRAILING:].mean())


@pytest.fixture(scope="session")
def trained_tails():
    """Trailing-window mean avg_user_reward for every (mode, U, seed) run."""
    jobs = [("dl", 8, seed) for seed in SEEDS]
    jobs += [("fl", u, seed) for u in (2, 4, 6, 8) for seed in SEEDS]
    with ProcessPoolExecutor(max_workers=2) as pool:
        return dict(pool.map(trailing_mean_of_run, jobs))


def test_fl_beats_dl_ordering(trained_tails):
    fl = np.mean([trained_tails[("fl", 8, s)] for s in SEEDS])
    dl = np.mean([trained_tails[("dl", 8, s)] for s in SEEDS])
    gain = (fl - dl) / dl
    report(
        "FL-beats-DL ordering",
        gain >= 0.05,
        f"FL={fl:.3f} DL={dl:.3f} relative gain={gain * 100:+.2f}% (required >= +5%)",
    )


def test_participation_monotonic_trend(trained_tails):
    levels = (2, 4, 6, 8)
    means = [np.mean([trained_tails[("fl", u, s)] for s in SEEDS]) for u in levels]
    rho, _ = spearmanr(levels, means)
    ok = rho > 0 and means[-1] > means[0]
    report(
        "Participation monotonic trend",
        ok,
        f"tails per U {dict(zip(levels, [round(m, 3) for m in means]))}, spearman rho={rho:+.2f}",
    )


def test_gradient_oracle():
    rng = np.random.default_rng(2024)
    dims = (4, 3, 3)
    worst = 0.0
    for _ in range(50):
        params = init_params(dims, rng)
        t_steps = 5
        traj = Trajectory(
            observations=rng.uniform(0.0, 1.0, size=(t_steps, dims[0])),
            actions=rng.integers(0, dims[2], size=t_steps),
            rewards=rng.uniform(0.0, 1.0, size=t_steps),
        )
        grad = policy_gradient(params, traj, 0.9).flatten()
        flat = params.flatten()
        for coord in rng.choice(flat.size, size=10, replace=False):
            step = 1e-5
            plus, minus = flat.copy(), flat.copy()
            plus[coord] += step
            minus[coord] -= step
            fd = (
                surrogate_loss(PolicyParams.unflatten(plus, dims), traj, 0.9)
                - surrogate_loss(PolicyParams.unflatten(minus, dims), traj, 0.9)
            ) / (2 * step)
            rel = abs(fd - grad[coord]) / max(abs(fd), abs(grad[coord]), 1e-4)
            worst = max(worst, rel)
    report(
        "Gradient oracle",
        worst < 1e-4,
        f"max relative error across 50 instances = {worst:.2e} (tolerance 1e-4)",
    )


def test_pu_chain_stationarity():
    config = ScenarioConfig().validate()
    rng = np.random.default_rng(777)
    state = initial_pu_state(config, rng)
    transitions = 1_000_000
    steps = transitions // config.n_channels
    busy = 0
    for _ in range(steps):
        state = pu_transition(state, rng)
        busy += int(state.occupied.sum())
    occupancy = busy / (steps * config.n_channels)
    report(
        "PU chain stationarity",
        abs(occupancy - 0.2) <= 0.005,
        f"empirical occupancy over {steps * config.n_channels} transitions = {occupancy:.4f} "
        f"(target 0.2 +- 0.005)",
    )


def test_rician_normalization():
    rng = np.random.default_rng(4242)
    gains = sample_rician_power_gain(5.0, rng, size=1_000_000)
    mean = float(gains.mean())
    report(
        "Rician normalization",
        abs(mean - 1.0) <= 0.01,
        f"mean power gain at K=5 over 1e6 samples = {mean:.5f} (target 1.0 +- 1%)",
    )


def test_federation_algebra():
    dims = (8, 32, 5)
    models = [init_params(dims, np.random.default_rng(seed)) for seed in range(5)]

    identity_ok = np.array_equal(aggregate([models[0]]).flatten(), models[0].flatten())
    idempotent_ok = np.array_equal(
        aggregate([models[1], models[1]]).flatten(), models[1].flatten()
    )
    reference = aggregate(models).flatten()
    perm_ok = all(
        np.array_equal(aggregate([models[i] for i in perm]).flatten(), reference)
        for perm in ([4, 3, 2, 1, 0], [2, 0, 4, 1, 3])
    )

    snapshots = [m.flatten().copy() for m in models]
    global_model, updated = fl_round(models, RoundPlan(0, (1, 3)))
    untouched_ok = all(
        np.array_equal(updated[i].flatten(), snapshots[i]) for i in (0, 2, 4)
    )
    _, synced = fl_round(models, RoundPlan(1, tuple(range(5))))
    full_ok = all(np.array_equal(a.flatten(), synced[0].flatten()) for a in synced)

    ok = identity_ok and idempotent_ok and perm_ok and untouched_ok and full_ok
    report(
        "Federation algebra",
        ok,
        f"identity={identity_ok} idempotence={idempotent_ok} permutation={perm_ok} "
        f"non-participants-untouched={untouched_ok} full-sync={full_ok}",
    )


def test_csv_determinism(tmp_path):
    config = ScenarioConfig(episodes=300, seed=31).validate()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_experiment(config), a)
    write_csv(run_experiment(config), b)
    same = a.read_bytes() == b.read_bytes()
    report(
        "Determinism",
        same,
        f"two identical runs -> byte-identical CSVs ({a.stat().st_size} bytes)",
    )


def test_blocking_and_idle_invariants():
    config = ScenarioConfig().validate()
    env = SpectrumEnv(config, generate_topology(config, rng_fork(11, "topology")))
    action_rng = np.random.default_rng(0)
    env_rng = np.random.default_rng(1)
    pu = initial_pu_state(config, env_rng)
    history = env.new_history()
    violations = 0
    steps = 10_000
    for t in range(steps):
        if t % config.steps_per_episode == 0:
            history = env.new_history()
        actions = action_rng.integers(0, config.n_channels + 1, size=config.n_agents)
        outcome = env.step(pu, actions, history, env_rng)
        for i, act in enumerate(actions):
            blocked = act > 0 and pu.occupied[act - 1]
            if (act == 0 or blocked) and outcome.rewards[i] != 0.0:
                violations += 1
        pu = outcome.pu_state_next
    report(
        "Blocking/idle invariants",
        violations == 0,
        f"{violations} violations in {steps} randomized steps",
    )
