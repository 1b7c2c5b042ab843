"""Steering vectors, transmit beamformers and received-signal covariances.

Geometry conventions: uniform linear arrays with half-wavelength spacing,
phase reference at element 0, angles in radians restricted to the open
interval (-pi/2, pi/2). Steering vectors have unit-magnitude entries, so
||a(theta)||^2 = m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCombination, DomainError
from .numerics import HermitianMatrix

_HALF_PI = math.pi / 2.0


def _check_angle(theta: float, what: str = "theta") -> None:
    if not (abs(theta) < _HALF_PI):
        raise DomainError(f"{what} must lie in (-pi/2, pi/2), got {theta!r} rad")


def _frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Target:
    """Point reflector: complex reflection coefficient, AoD at TX, AoA at SRx."""

    gamma: complex
    theta_s: float  # radians
    theta_r: float  # radians

    def __post_init__(self):
        if abs(self.gamma) <= 0:
            raise ValueError("target reflection coefficient must be nonzero")
        _check_angle(self.theta_s, "theta_s")
        _check_angle(self.theta_r, "theta_r")


@dataclass(frozen=True)
class Scenario:
    """Full bistatic system description used by the bounds and sweeps."""

    m_tx: int
    m_rx: int
    snapshots: int
    targets: tuple[Target, ...]
    noise_var_sense: float
    noise_var_comm: float
    power_budget: float
    prior_range: float  # zeta, width of the uniform AoA prior (radians)
    theta_c: float  # communication user angle (radians)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.m_tx < 1:
            raise ValueError("m_tx must be >= 1")
        if self.m_rx < 2:
            raise ValueError("m_rx must be >= 2 (AoA estimation needs >= 2 elements)")
        if self.snapshots < 1:
            raise ValueError("snapshots must be >= 1")
        for name in ("noise_var_sense", "noise_var_comm", "power_budget"):
            if not (getattr(self, name) > 0):
                raise ValueError(f"{name} must be > 0")
        if not (0 < self.prior_range <= math.pi):
            raise ValueError("prior_range must satisfy 0 < zeta <= pi")
        _check_angle(self.theta_c, "theta_c")
        half = self.prior_range / 2.0
        for i, t in enumerate(self.targets):
            if not (-half <= t.theta_r <= half):
                raise ValueError(
                    f"targets[{i}].theta_r = {t.theta_r!r} outside prior [-zeta/2, zeta/2]"
                )

    @property
    def n_targets(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class Beamformer:
    """Transmit weight vector with ||w||^2 pinned to the power budget."""

    weights: np.ndarray
    power_budget: float

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen_array(self.weights))
        if self.weights.ndim != 1 or self.weights.size < 1:
            raise ValueError("beamformer weights must be a nonempty vector")
        norm2 = float(np.real(self.weights.conj() @ self.weights))
        if abs(norm2 - self.power_budget) > 1e-10 * self.power_budget:
            raise ValueError(
                f"||w||^2 = {norm2!r} violates power budget {self.power_budget!r}"
            )

    @property
    def m_tx(self) -> int:
        return self.weights.size


def steering_vector(theta: float, m: int) -> np.ndarray:
    """ULA steering vector; entry k is exp(i pi k sin(theta)), k = 0..m-1."""
    _check_angle(theta)
    if m < 1:
        raise ValueError("antenna count must be >= 1")
    k = np.arange(m)
    return np.exp(1j * math.pi * k * math.sin(theta))


def steering_derivative(theta: float, m: int) -> np.ndarray:
    """Derivative of steering_vector with respect to theta."""
    _check_angle(theta)
    if m < 1:
        raise ValueError("antenna count must be >= 1")
    k = np.arange(m)
    return 1j * math.pi * k * math.cos(theta) * np.exp(1j * math.pi * k * math.sin(theta))


def steered_beamformer(theta: float, m_tx: int, power: float) -> Beamformer:
    """Matched beam sqrt(P) a(theta)/||a(theta)||; gain |a^H w|^2 = P * m_tx."""
    a = steering_vector(theta, m_tx)
    w = math.sqrt(power) * a / np.linalg.norm(a)
    return Beamformer(w, power)


def sjb_beamformer(
    alpha: float, theta_c: float, theta_s: float, m_tx: int, power: float
) -> Beamformer:
    """Subspace joint beamformer: normalized convex combination of the
    unit-norm communication- and sensing-optimal beams, scaled to the budget."""
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    u_c = steering_vector(theta_c, m_tx) / math.sqrt(m_tx)
    u_s = steering_vector(theta_s, m_tx) / math.sqrt(m_tx)
    v = alpha * u_c + (1.0 - alpha) * u_s
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise DegenerateCombination(
            f"combined beam cancelled (||.|| = {norm:.3e}) at alpha = {alpha!r}"
        )
    return Beamformer(math.sqrt(power) * v / norm, power)


def sensing_multibeam(thetas, m_tx: int, power: float) -> Beamformer:
    """Equal-power multi-beam: renormalized sum of unit-norm steering vectors."""
    thetas = list(thetas)
    if not thetas:
        raise ValueError("need at least one steering angle")
    v = np.zeros(m_tx, dtype=complex)
    for th in thetas:
        v += steering_vector(th, m_tx) / math.sqrt(m_tx)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise DegenerateCombination("multi-beam steering vectors cancelled")
    return Beamformer(math.sqrt(power) * v / norm, power)


def target_effective_power(t: Target, w: Beamformer) -> float:
    """Effective reflected power p_k = |gamma|^2 |a_tx(theta_s)^H w|^2."""
    a = steering_vector(t.theta_s, w.m_tx)
    return abs(t.gamma) ** 2 * abs(np.vdot(a, w.weights)) ** 2


def sensing_snr(t: Target, w: Beamformer, sigma2: float) -> float:
    """Per-target linear sensing SNR at the sensing receiver."""
    if not (sigma2 > 0):
        raise ValueError("sigma2 must be > 0")
    return target_effective_power(t, w) / sigma2


def received_covariance(s: Scenario, w: Beamformer) -> HermitianMatrix:
    """Covariance of the sensing receiver snapshots:
    sum_k p_k a(theta_rk) a(theta_rk)^H + sigma^2 I."""
    r = s.noise_var_sense * np.eye(s.m_rx, dtype=complex)
    for t in s.targets:
        p = target_effective_power(t, w)
        a = steering_vector(t.theta_r, s.m_rx)
        r += p * np.outer(a, a.conj())
    return HermitianMatrix(r)


def perturbed_covariance(s: Scenario, w: Beamformer, deltas) -> HermitianMatrix:
    """received_covariance with each AoA shifted by the matching offset."""
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape != (s.n_targets,):
        raise ValueError(f"expected {s.n_targets} offsets, got shape {deltas.shape}")
    r = s.noise_var_sense * np.eye(s.m_rx, dtype=complex)
    for t, d in zip(s.targets, deltas):
        theta = t.theta_r + float(d)
        _check_angle(theta, "perturbed theta_r")
        p = target_effective_power(t, w)
        a = steering_vector(theta, s.m_rx)
        r += p * np.outer(a, a.conj())
    return HermitianMatrix(r)
