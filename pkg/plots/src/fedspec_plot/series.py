"""Series math: smoothing and trailing-window summaries."""

from __future__ import annotations

import numpy as np


def centered_moving_average(values, window: int) -> np.ndarray:
    """Centered moving average with edge truncation.

    Each output point averages the raw values in a window of nominal size
    ``window`` centered on it ((window-1)//2 before, window//2 after),
    truncated at the series boundaries. ``window=1`` returns the series
    unchanged.
    """
    if window < 1:
        raise ValueError("smoothing window must be >= 1")
    x = np.asarray(values, dtype=float)
    if window == 1:
        return x.copy()
    n = x.shape[0]
    left = (window - 1) // 2
    right = window // 2
    csum = np.concatenate([[0.0], np.cumsum(x)])
    idx = np.arange(n)
    lo = np.maximum(idx - left, 0)
    hi = np.minimum(idx + right, n - 1)
    return (csum[hi + 1] - csum[lo]) / (hi + 1 - lo)


def trailing_mean(values, window: int) -> float:
    """Mean of the last ``window`` entries; the window must fit."""
    x = np.asarray(values, dtype=float)
    if window < 1:
        raise ValueError("trailing window must be >= 1")
    if window > x.shape[0]:
        raise ValueError(
            f"trailing window of {window} episodes exceeds the {x.shape[0]} episodes available"
        )
    return float(x[-window:].mean())
