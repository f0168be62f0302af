"""Per-episode metrics records and their CSV serialization."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

__all__ = ["MetricsRecord", "CSV_HEADER", "write_csv", "read_csv"]

CSV_HEADER = "mode,seed,episode,agent_id,episode_reward,avg_user_reward,joint_reward"


@dataclass(frozen=True)
class MetricsRecord:
    """One agent's reward summary for one training episode.

    ``episode_reward`` is the sum of the agent's per-step normalized
    rewards; ``avg_user_reward`` (the same for every agent of an episode)
    averages the episode rewards over agents and ``joint_reward`` sums
    them.
    """

    mode: str
    seed: int
    episode: int
    agent_id: int
    episode_reward: float
    avg_user_reward: float
    joint_reward: float


def _fmt(value: float) -> str:
    return format(value, ".9g")


def format_row(record: MetricsRecord) -> str:
    return (
        f"{record.mode},{record.seed},{record.episode},{record.agent_id},"
        f"{_fmt(record.episode_reward)},{_fmt(record.avg_user_reward)},{_fmt(record.joint_reward)}"
    )


def write_rows(records: Iterable[MetricsRecord], stream: TextIO) -> None:
    stream.write(CSV_HEADER + "\n")
    for record in records:
        stream.write(format_row(record) + "\n")


def write_csv(records: Iterable[MetricsRecord], path) -> None:
    """Stream records to ``path``: exact header, one newline-terminated row
    per record, floats at 9 significant digits."""
    path = Path(path)
    try:
        with path.open("w", newline="") as stream:
            write_rows(records, stream)
    except OSError as exc:
        raise OSError(f"failed writing metrics CSV to {path}: {exc}") from exc


def read_csv(path) -> list[MetricsRecord]:
    """Parse a metrics CSV written by :func:`write_csv`."""
    path = Path(path)
    with path.open() as stream:
        header = stream.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header!r}")
        records = []
        for line in stream:
            mode, seed, episode, agent_id, ep_r, avg_r, joint_r = line.rstrip("\n").split(",")
            records.append(
                MetricsRecord(
                    mode=mode,
                    seed=int(seed),
                    episode=int(episode),
                    agent_id=int(agent_id),
                    episode_reward=float(ep_r),
                    avg_user_reward=float(avg_r),
                    joint_reward=float(joint_r),
                )
            )
    return records
