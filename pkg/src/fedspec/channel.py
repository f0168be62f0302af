"""Radio-layer math for the spectrum access simulator.

Everything here is a pure function: path loss, Rician small-scale fading,
received power, SINR with co-channel interference, thermal noise, and
Shannon throughput. Power arithmetic is carried out in linear milliwatts;
dB quantities appear only at the configuration boundary (transmit power,
path loss, noise density). Randomness always comes in through an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NodePosition",
    "LinkBudget",
    "path_loss_db",
    "sample_rician_power_gain",
    "received_power_mw",
    "sinr",
    "throughput_bps",
    "noise_power_mw",
]

#: Default log-distance path loss coefficients: a + b*log10(d[m]) dB.
DEFAULT_PATHLOSS_A_DB = 41.0
DEFAULT_PATHLOSS_B_DB = 22.7


@dataclass(frozen=True)
class NodePosition:
    """A transmitter or receiver location in the deployment area, in meters."""

    x: float
    y: float

    def distance_to(self, other: "NodePosition") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class LinkBudget:
    """One link computation: transmit power through path loss and fading.

    Invariant: ``rx_power_mw == 10**((tx_power_dbm - path_loss_db)/10) *
    fading_power_gain``, checked on construction.
    """

    tx_power_dbm: float
    path_loss_db: float
    fading_power_gain: float
    rx_power_mw: float

    def __post_init__(self) -> None:
        if self.fading_power_gain < 0:
            raise ValueError("fading_power_gain must be >= 0")
        expected = 10.0 ** ((self.tx_power_dbm - self.path_loss_db) / 10.0) * self.fading_power_gain
        if not math.isclose(self.rx_power_mw, expected, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(
                f"inconsistent link budget: rx_power_mw={self.rx_power_mw!r}, expected {expected!r}"
            )
        if self.rx_power_mw < 0:
            raise ValueError("rx_power_mw must be >= 0")

    @classmethod
    def from_link(
        cls, tx_power_dbm: float, path_loss_db: float, fading_power_gain: float
    ) -> "LinkBudget":
        rx = 10.0 ** ((tx_power_dbm - path_loss_db) / 10.0) * fading_power_gain
        return cls(tx_power_dbm, path_loss_db, fading_power_gain, rx)


def path_loss_db(
    distance_m,
    a_db: float = DEFAULT_PATHLOSS_A_DB,
    b_db: float = DEFAULT_PATHLOSS_B_DB,
):
    """Log-distance path loss ``a + b*log10(d[m])`` in dB.

    Accepts a scalar or an array of distances; distances must be strictly
    positive.
    """
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be > 0 m")
    out = a_db + b_db * np.log10(d)
    return float(out) if np.isscalar(distance_m) or d.ndim == 0 else out


def sample_rician_power_gain(k_factor: float, rng: np.random.Generator, size=None):
    """Draw Rician fading power gains ``|h|^2`` with E[|h|^2] = 1.

    The channel coefficient is ``h = sqrt(K/(K+1))*exp(j*phi) +
    sqrt(1/(K+1))*g`` with ``phi`` uniform on [0, 2*pi) and ``g`` a
    circularly-symmetric complex Gaussian of unit variance. K = 0 reduces
    to Rayleigh fading (exponential power gain); K = inf is a pure
    line-of-sight link with gain exactly 1.

    Returns a float when ``size`` is None, otherwise an array of that shape.
    """
    if k_factor < 0:
        raise ValueError("Rician K-factor must be >= 0")
    if math.isinf(k_factor):
        return 1.0 if size is None else np.ones(size)

    los_amp = math.sqrt(k_factor / (k_factor + 1.0))
    scatter_amp = math.sqrt(1.0 / (k_factor + 1.0))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=size)
    # Unit-variance complex Gaussian: each quadrature has variance 1/2.
    g_re = rng.standard_normal(size=size) / math.sqrt(2.0)
    g_im = rng.standard_normal(size=size) / math.sqrt(2.0)
    re = los_amp * np.cos(phi) + scatter_amp * g_re
    im = los_amp * np.sin(phi) + scatter_amp * g_im
    gain = re * re + im * im
    return float(gain) if size is None else gain


def received_power_mw(
    tx_power_dbm: float,
    tx: NodePosition,
    rx: NodePosition,
    fading_power_gain: float,
    a_db: float = DEFAULT_PATHLOSS_A_DB,
    b_db: float = DEFAULT_PATHLOSS_B_DB,
) -> float:
    """Received power in mW over one link: tx power, path loss, fading."""
    if fading_power_gain < 0:
        raise ValueError("fading_power_gain must be >= 0")
    d = tx.distance_to(rx)
    if d <= 0:
        raise ValueError("tx and rx positions must be distinct")
    pl = path_loss_db(d, a_db=a_db, b_db=b_db)
    return 10.0 ** ((tx_power_dbm - pl) / 10.0) * fading_power_gain


def sinr(signal_mw: float, interference_mw, noise_mw: float) -> float:
    """Signal to interference-plus-noise ratio (dimensionless, linear)."""
    if noise_mw <= 0:
        raise ValueError("noise power must be > 0 mW")
    interference = np.asarray(interference_mw, dtype=float)
    if signal_mw < 0 or np.any(interference < 0):
        raise ValueError("powers must be >= 0")
    return signal_mw / (noise_mw + float(interference.sum()))


def throughput_bps(sinr_value: float, bandwidth_hz: float) -> float:
    """Shannon throughput ``B * log2(1 + SINR)`` in bits/second."""
    if sinr_value < 0:
        raise ValueError("SINR must be >= 0")
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be > 0 Hz")
    return bandwidth_hz * math.log1p(sinr_value) / math.log(2.0)


def noise_power_mw(noise_density_dbm_hz: float, bandwidth_hz: float) -> float:
    """Thermal noise power over a bandwidth, in mW."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be > 0 Hz")
    return 10.0 ** (noise_density_dbm_hz / 10.0) * bandwidth_hz
