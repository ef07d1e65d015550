"""Pilot correlation model ``y_t = sqrt(tau) * h + n_t``."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class PilotConfig:
    pilot_length: int = 1
    noise_variance: float = 0.0

    def __post_init__(self):
        if self.pilot_length < 1:
            raise ValueError(f"pilot_length must be >= 1, got {self.pilot_length}")
        if self.noise_variance < 0:
            raise ValueError(f"noise_variance must be >= 0, got {self.noise_variance}")


@dataclass(frozen=True)
class Observation:
    y: np.ndarray = field(repr=False)
    pilot: PilotConfig

    @property
    def n_antennas(self) -> int:
        return self.y.shape[0]

    def normalized(self) -> np.ndarray:
        """``y / sqrt(tau)``, an unbiased view of the channel."""
        return self.y / np.sqrt(self.pilot.pilot_length)


def observe(h, pilot: PilotConfig, rng_seed) -> Observation:
    """Correlated pilot observation of channel ``h``.

    The tau-slot received matrix is never formed: after correlating with the
    normalized pilot, the noise is again i.i.d. CN(0, sigma^2) per antenna.
    """
    h = np.asarray(h, dtype=complex)
    tau, var = pilot.pilot_length, pilot.noise_variance
    y = np.sqrt(tau) * h
    if var > 0:
        rng = np.random.default_rng(rng_seed)
        noise = rng.standard_normal((2, h.shape[0]))
        y = y + np.sqrt(var / 2) * (noise[0] + 1j * noise[1])
    return Observation(y=y, pilot=pilot)


def sigma_for_snr(snr_db: float, tau: int, avg_power: float) -> float:
    """Noise variance giving post-correlation SNR ``tau*avg_power/sigma^2``."""
    if not avg_power > 0:
        raise ValueError(f"avg_power must be positive, got {avg_power}")
    return tau * avg_power / 10 ** (snr_db / 10)
