"""Reading and aggregating fedspec metrics CSVs.

The input contract is the CSV schema emitted by the simulator:
``mode,seed,episode,agent_id,episode_reward,avg_user_reward,joint_reward``.
Files are only ever read; a file may hold several runs (one per seed).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

REQUIRED_COLUMNS = (
    "mode",
    "seed",
    "episode",
    "agent_id",
    "episode_reward",
    "avg_user_reward",
    "joint_reward",
)


class SchemaError(ValueError):
    """The CSV does not match the metrics schema."""


@dataclass(frozen=True)
class EpisodeSeries:
    """Per-episode averaged-user reward extracted from one metrics CSV.

    ``values[i]`` is avg_user_reward at ``episodes[i]``, deduplicated
    across agent rows and averaged across seeds when the file holds
    several runs.
    """

    label: str
    episodes: np.ndarray
    values: np.ndarray


def read_episode_series(path) -> EpisodeSeries:
    """Load one CSV into a per-episode series.

    Raises SchemaError naming the first missing column if the header does
    not match the metrics schema.
    """
    path = Path(path)
    with path.open(newline="") as stream:
        reader = csv.DictReader(stream)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(f"{path}: missing column {column!r}")
        label = None
        per_seed_episode: dict[tuple[int, int], float] = {}
        for row in reader:
            if label is None:
                label = row["mode"]
            key = (int(row["seed"]), int(row["episode"]))
            # Rows repeat avg_user_reward once per agent; keep the first.
            per_seed_episode.setdefault(key, float(row["avg_user_reward"]))
    if not per_seed_episode:
        raise SchemaError(f"{path}: no data rows")

    by_episode: dict[int, list[float]] = {}
    for (_, episode), value in per_seed_episode.items():
        by_episode.setdefault(episode, []).append(value)
    episodes = np.array(sorted(by_episode))
    values = np.array([np.mean(by_episode[e]) for e in episodes])
    return EpisodeSeries(label=label or "", episodes=episodes, values=values)
