"""The two figure kinds: learning curves and the participation sweep.

Both operations read metrics CSVs, compute the plotted series with plain
numpy (so tests can check the numbers against an independent reference),
render a PNG, and return the series they drew. Input files are never
modified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import read_episode_series
from .series import centered_moving_average, trailing_mean

FIGURE_KINDS = ("learning_curve", "participation_bar")

_U_FILENAME = re.compile(r"^u(\d+)\.csv$")


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: inputs, smoothing/trailing window, output image."""

    input_paths: tuple = ()
    smoothing_window: int = 100
    output_path: str = "figure.png"
    figure_kind: str = "learning_curve"

    def __post_init__(self) -> None:
        if not self.input_paths:
            raise ValueError("at least one input CSV is required")
        if self.smoothing_window < 1:
            raise ValueError("smoothing_window must be >= 1")
        if self.figure_kind not in FIGURE_KINDS:
            raise ValueError(f"figure_kind must be one of {FIGURE_KINDS}")


def learning_curve(spec: PlotSpec) -> dict:
    """Render reward-vs-episode curves, one line per input CSV.

    Each line is the centered moving average of the per-episode averaged
    user reward, labeled by the run's mode column. Returns
    ``{label: (episodes, smoothed_values)}`` for the series drawn.
    """
    curves = {}
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in spec.input_paths:
        series = read_episode_series(path)
        smoothed = centered_moving_average(series.values, spec.smoothing_window)
        label = series.label or Path(path).stem
        curves[label] = (series.episodes, smoothed)
        ax.plot(series.episodes, smoothed, label=label.upper())
    ax.set_xlabel("episode")
    ax.set_ylabel("averaged user reward (normalized)")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return curves


def parse_participants(path) -> int:
    """Participation level encoded in a sweep filename ``u<k>.csv``."""
    name = Path(path).name
    match = _U_FILENAME.match(name)
    if not match:
        raise ValueError(f"cannot parse participation level from filename {name!r}")
    return int(match.group(1))


def participation_bar(spec: PlotSpec) -> list:
    """Render trailing-window mean reward against participation level.

    Every input CSV holds one sweep point and must be named ``u<k>.csv``.
    Returns the drawn points as ``[(u, trailing_mean), ...]`` sorted by u.
    """
    points = []
    for path in spec.input_paths:
        u = parse_participants(path)
        series = read_episode_series(path)
        points.append((u, trailing_mean(series.values, spec.smoothing_window)))
    points.sort()

    fig, ax = plt.subplots(figsize=(6, 4))
    us = [p[0] for p in points]
    vals = [p[1] for p in points]
    ax.bar([str(u) for u in us], vals, color="tab:blue", width=0.6)
    ax.set_xlabel("participating users per round")
    ax.set_ylabel("averaged user reward (normalized)")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return points
