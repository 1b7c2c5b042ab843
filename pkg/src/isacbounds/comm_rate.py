"""Downlink rate for the single-antenna communication user.

The channel coefficient is modeled as circularly symmetric complex Gaussian
(Rayleigh envelope), which gives the exact ergodic rate
log2(e) e^(1/rho) E1(1/rho) for mean post-beamforming SNR rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_model import Beamformer, steering_vector
from .errors import DomainError
from .numerics import exp_scaled_e1

_LOG2_E = math.log2(math.e)


@dataclass(frozen=True)
class CommChannel:
    """LOS channel to the user: angle, mean channel gain, noise power."""

    theta_c: float  # radians
    mean_gain: float  # sigma_alpha^2, E|alpha_c|^2
    noise_var: float  # sigma_c^2

    def __post_init__(self):
        if not (self.mean_gain > 0):
            raise ValueError("mean channel gain must be > 0")
        if not (self.noise_var > 0):
            raise ValueError("noise variance must be > 0")


def beamforming_gain(ch: CommChannel, w: Beamformer) -> float:
    """|a_tx(theta_c)^H w|^2 toward the user."""
    a = steering_vector(ch.theta_c, w.m_tx)
    return abs(np.vdot(a, w.weights)) ** 2


def instantaneous_rate(alpha_c: complex, ch: CommChannel, w: Beamformer) -> float:
    """log2(1 + |alpha_c|^2 |a^H w|^2 / sigma_c^2) in bps/Hz."""
    snr = abs(alpha_c) ** 2 * beamforming_gain(ch, w) / ch.noise_var
    return math.log2(1.0 + snr)


def ergodic_rate_closed(mean_snr: float) -> float:
    """Exact expectation of log2(1 + mean_snr * X), X unit-mean exponential:
    log2(e) e^(1/rho) E1(1/rho)."""
    if not (mean_snr > 0) or not math.isfinite(mean_snr):
        raise DomainError(f"mean SNR must be > 0, got {mean_snr!r}")
    return _LOG2_E * exp_scaled_e1(1.0 / mean_snr)


def ergodic_rate_mc(
    ch: CommChannel, w: Beamformer, n_samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo ergodic rate: (sample mean, standard error).

    alpha_c drawn i.i.d. circularly symmetric complex Gaussian with variance
    mean_gain; deterministic for a given seed.
    """
    if n_samples < 100:
        raise ValueError("need at least 100 samples")
    rng = np.random.default_rng(seed)
    scale = math.sqrt(ch.mean_gain / 2.0)
    alpha = scale * (rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples))
    snr = np.abs(alpha) ** 2 * (beamforming_gain(ch, w) / ch.noise_var)
    rates = np.log2(1.0 + snr)
    mean = float(np.mean(rates))
    stderr = float(np.std(rates, ddof=1) / math.sqrt(n_samples))
    return mean, stderr
