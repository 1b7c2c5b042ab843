"""Monte Carlo sweeps, RMSE aggregation and Pareto-front extraction.

SNR calibration convention (uniform across sweeps): reflection coefficients
are scaled so that the per-target sensing SNR equals the grid value under the
sensing-optimal beam; the beam actually in use then modulates the SNR through
its gain relative to that reference. Communication SNR is referenced to the
communication-optimal beam the same way.

Determinism: every trial draws from a generator seeded by
(master_seed, grid_index, trial_index), so results are independent of
execution order and worker count.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .array_model import (
    Scenario,
    Target,
    sensing_multibeam,
    sjb_beamformer,
    steered_beamformer,
    steering_vector,
)
from .bounds import apriori_bound, zzb_closed
from .comm_rate import ergodic_rate_closed
from .errors import EmptyInput, InfeasibleSeparation, SingularFisher

_MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Scenario template plus the sweep grids and Monte Carlo controls."""

    scenario: Scenario
    snr_grid_db: tuple[float, ...]
    alpha_grid: tuple[float, ...]
    n_trials: int
    master_seed: int
    min_separation: float  # pairwise |sin t_i - sin t_j| floor

    def __post_init__(self):
        object.__setattr__(self, "snr_grid_db", tuple(float(x) for x in self.snr_grid_db))
        object.__setattr__(self, "alpha_grid", tuple(float(x) for x in self.alpha_grid))
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        for name in ("snr_grid_db", "alpha_grid"):
            grid = getattr(self, name)
            if not grid:
                raise ValueError(f"{name} must be nonempty")
            if list(grid) != sorted(grid):
                raise ValueError(f"{name} must be sorted ascending")
        if not (self.min_separation >= 0):
            raise ValueError("min_separation must be >= 0")


@dataclass(frozen=True)
class SweepRow:
    """One aggregated point of a sweep (independent variable is dB or alpha)."""

    x: float
    zzb_rmse_deg: float
    crb_rmse_deg: float
    apb_rmse_deg: float
    rate_bps_hz: float | None
    n_trials: int
    n_excluded: int


@dataclass(frozen=True)
class TradeoffPoint:
    """(alpha, rate, ZZB RMSE, CRB RMSE) on a rate-vs-sensing curve."""

    alpha: float
    rate_bps_hz: float
    zzb_rmse_deg: float
    crb_rmse_deg: float


def draw_aoas(k: int, zeta: float, min_sep: float, rng: np.random.Generator) -> np.ndarray:
    """K i.i.d. uniform AoAs on [-zeta/2, zeta/2], rejection-resampled until all
    pairwise sin-space distances reach min_sep; returned sorted ascending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    half = zeta / 2.0
    for _ in range(_MAX_REJECTIONS):
        thetas = np.sort(rng.uniform(-half, half, size=k))
        if k == 1:
            return thetas
        sines = np.sin(thetas)
        if np.min(np.diff(sines)) >= min_sep:
            return thetas
    raise InfeasibleSeparation(
        f"could not draw {k} AoAs with sin-space separation {min_sep!r} "
        f"inside a width-{zeta!r} prior after {_MAX_REJECTIONS} attempts"
    )


def rmse_aggregate(per_trial_mse) -> float:
    """sqrt(mean of per-trial MSE values in radians^2), converted to degrees."""
    values = np.asarray(list(per_trial_mse), dtype=float)
    if values.size == 0:
        raise EmptyInput("cannot aggregate an empty list of trials")
    if not np.all(np.isfinite(values)):
        raise ValueError("per-trial MSE values must all be finite")
    return math.degrees(math.sqrt(float(np.mean(values))))


def _sensing_reference_beam(cfg: ExperimentConfig):
    s = cfg.scenario
    aods = [t.theta_s for t in s.targets]
    if len(aods) == 1:
        return steered_beamformer(aods[0], s.m_tx, s.power_budget)
    return sensing_multibeam(aods, s.m_tx, s.power_budget)


def _trial_seed(master_seed: int, grid_index: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(grid_index, trial_index))
    return np.random.default_rng(ss)


def _bound_trial(cfg: ExperimentConfig, snr_index: int, trial: int, snr_lin: float, w):
    """One Monte Carlo draw: redraw AoAs, recalibrate gammas, evaluate bounds.

    Returns (zzb, mean_crb) in radians^2 or None when the Fisher matrix came
    out singular (excluded trial).
    """
    s = cfg.scenario
    rng = _trial_seed(cfg.master_seed, snr_index, trial)
    thetas_r = draw_aoas(s.n_targets, s.prior_range, cfg.min_separation, rng)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=s.n_targets)
    targets = []
    for t, theta_r, phase in zip(s.targets, thetas_r, phases):
        gain = abs(np.vdot(steering_vector(t.theta_s, s.m_tx), w.weights)) ** 2
        mag = math.sqrt(snr_lin * s.noise_var_sense / gain)
        targets.append(Target(mag * cmath.exp(1j * phase), t.theta_s, float(theta_r)))
    trial_scenario = replace(s, targets=tuple(targets))
    try:
        report = zzb_closed(trial_scenario, w)
    except SingularFisher:
        return None
    return report.zzb, float(np.trace(report.crb)) / s.n_targets


def bound_vs_snr_sweep(cfg: ExperimentConfig, workers: int = 1) -> list[SweepRow]:
    """RMSE of ZZB/CRB/APB versus sensing SNR under the sensing-optimal beam."""
    s = cfg.scenario
    w = _sensing_reference_beam(cfg)
    apb_deg = math.degrees(math.sqrt(apriori_bound(s.n_targets, s.prior_range)))
    rows = []
    for i, snr_db in enumerate(cfg.snr_grid_db):
        snr_lin = 10.0 ** (snr_db / 10.0)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(
                    pool.map(
                        lambda t: _bound_trial(cfg, i, t, snr_lin, w),
                        range(cfg.n_trials),
                    )
                )
        else:
            results = [_bound_trial(cfg, i, t, snr_lin, w) for t in range(cfg.n_trials)]
        kept = [r for r in results if r is not None]
        n_excluded = cfg.n_trials - len(kept)
        rows.append(
            SweepRow(
                x=snr_db,
                zzb_rmse_deg=rmse_aggregate([r[0] for r in kept]),
                crb_rmse_deg=rmse_aggregate([r[1] for r in kept]),
                apb_rmse_deg=apb_deg,
                rate_bps_hz=None,
                n_trials=len(kept),
                n_excluded=n_excluded,
            )
        )
    return rows


def alpha_sweep(
    cfg: ExperimentConfig,
    comm_snr_db: float,
    sensing_snr_db_list,
) -> dict[float, list[SweepRow]]:
    """Fixed-geometry SJB sweep: rate and bounds versus alpha, one row list per
    sensing SNR. Requires a single-target scenario."""
    s = cfg.scenario
    if s.n_targets != 1:
        raise ValueError("alpha_sweep is defined for single-target scenarios")
    target = s.targets[0]
    comm_lin = 10.0 ** (comm_snr_db / 10.0)
    ref_gain = s.power_budget * s.m_tx  # |a^H w|^2 of a matched beam
    apb_deg = math.degrees(math.sqrt(apriori_bound(1, s.prior_range)))
    a_c = steering_vector(s.theta_c, s.m_tx)

    out: dict[float, list[SweepRow]] = {}
    for snr_db in sensing_snr_db_list:
        snr_db = float(snr_db)
        snr_lin = 10.0 ** (snr_db / 10.0)
        mag = math.sqrt(snr_lin * s.noise_var_sense / ref_gain)
        scenario_a = replace(s, targets=(Target(mag, target.theta_s, target.theta_r),))
        rows = []
        for alpha in cfg.alpha_grid:
            w = sjb_beamformer(alpha, s.theta_c, target.theta_s, s.m_tx, s.power_budget)
            report = zzb_closed(scenario_a, w)
            gain_c = abs(np.vdot(a_c, w.weights)) ** 2
            rho = comm_lin * gain_c / ref_gain
            rate = ergodic_rate_closed(rho) if rho > 0 else 0.0
            rows.append(
                SweepRow(
                    x=alpha,
                    zzb_rmse_deg=math.degrees(math.sqrt(report.zzb)),
                    crb_rmse_deg=math.degrees(math.sqrt(float(report.crb[0, 0]))),
                    apb_rmse_deg=apb_deg,
                    rate_bps_hz=rate,
                    n_trials=1,
                    n_excluded=0,
                )
            )
        out[snr_db] = rows
    return out


def pareto_front(points) -> list[TradeoffPoint]:
    """Nondominated subset under (maximize rate, minimize ZZB RMSE).

    Output sorted by rate ascending, rate ties broken by lower RMSE,
    exact duplicates removed.
    """
    pts = list(points)
    if not pts:
        raise EmptyInput("pareto_front requires at least one point")
    # Unique by (rate, rmse); keep one representative per coordinate pair.
    seen = {}
    for p in pts:
        seen.setdefault((p.rate_bps_hz, p.zzb_rmse_deg), p)
    uniq = list(seen.values())
    uniq.sort(key=lambda p: (-p.rate_bps_hz, p.zzb_rmse_deg))
    front = []
    best_rmse = math.inf
    for p in uniq:
        if p.zzb_rmse_deg < best_rmse:
            front.append(p)
            best_rmse = p.zzb_rmse_deg
    front.sort(key=lambda p: (p.rate_bps_hz, p.zzb_rmse_deg))
    return front


def pareto_sweep(
    cfg: ExperimentConfig,
    sensing_snr_db: float,
    comm_snr_db_list,
) -> dict[float, list[TradeoffPoint]]:
    """Rate-vs-ZZB Pareto fronts at a fixed sensing SNR, one per comm SNR."""
    fronts: dict[float, list[TradeoffPoint]] = {}
    for comm_db in comm_snr_db_list:
        comm_db = float(comm_db)
        rows = alpha_sweep(cfg, comm_db, [sensing_snr_db])[float(sensing_snr_db)]
        pts = [
            TradeoffPoint(
                alpha=r.x,
                rate_bps_hz=r.rate_bps_hz,
                zzb_rmse_deg=r.zzb_rmse_deg,
                crb_rmse_deg=r.crb_rmse_deg,
            )
            for r in rows
        ]
        fronts[comm_db] = pareto_front(pts)
    return fronts
