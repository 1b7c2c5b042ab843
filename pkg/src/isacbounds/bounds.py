"""AoA estimation bounds: stochastic CRB, detection error probabilities,
a priori bound, and the closed-form and numerically integrated Ziv-Zakai bounds.

All bound values are in radians^2 (weighted mean-square error); callers
convert to degrees for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_model import (
    Beamformer,
    Scenario,
    received_covariance,
    sensing_snr,
    steering_derivative,
    steering_vector,
    target_effective_power,
)
from .errors import DomainError, GridTooCoarse, NotPositiveDefinite, SingularFisher
from .numerics import (
    HermitianMatrix,
    hermitian_inverse,
    hermitian_solve,
    log_det,
    q_times_exp,
    reg_lower_gamma_3half,
)

# Condition-number ceiling for the Fisher information matrix.
_FISHER_COND_MAX = 1e12


@dataclass(frozen=True)
class BoundReport:
    """Bounds and intermediate quantities for one scenario/beam pair.

    crb and u_tilde are None only in the degraded report produced when the
    Fisher information is singular and the caller opted in to that path.
    """

    crb: np.ndarray | None  # K x K, radians^2
    zzb: float  # radians^2
    apb: float  # radians^2
    p_min_null: float
    u_tilde: float | None


def _cond_1norm(a: np.ndarray, a_inv: np.ndarray) -> float:
    return float(np.linalg.norm(a, 1) * np.linalg.norm(a_inv, 1))


def crb_stochastic(s: Scenario, w: Beamformer) -> np.ndarray:
    """Stochastic multi-target CRB on the AoA vector.

    CRB = sigma^2/(2L) * { Re[ Pi_H o (G A^H Ry^-1 A G)^T ] }^-1 with
    Pi_H = Ad^H [I - A (A^H A)^-1 A^H] Ad, o the Hadamard product, G the
    diagonal matrix of effective target powers and Ad the steering derivative
    matrix. Returns a K x K real symmetric positive definite matrix.
    """
    k = s.n_targets
    if k < 1:
        raise SingularFisher("no targets: Fisher information is empty")
    if k >= s.m_rx:
        raise SingularFisher(f"K = {k} >= m_rx = {s.m_rx}: Fisher information singular")

    a_mat = np.column_stack([steering_vector(t.theta_r, s.m_rx) for t in s.targets])
    ad_mat = np.column_stack([steering_derivative(t.theta_r, s.m_rx) for t in s.targets])
    powers = np.array([target_effective_power(t, w) for t in s.targets])
    g = np.diag(powers)

    ry = received_covariance(s, w)
    ry_inv_a = hermitian_solve(ry, a_mat)

    try:
        gram_inv = hermitian_inverse(HermitianMatrix(a_mat.conj().T @ a_mat)).mat
    except NotPositiveDefinite as exc:
        raise SingularFisher(f"steering gram matrix singular: {exc}") from exc
    proj = np.eye(s.m_rx, dtype=complex) - a_mat @ gram_inv @ a_mat.conj().T
    pi_h = ad_mat.conj().T @ proj @ ad_mat

    mid = g @ (a_mat.conj().T @ ry_inv_a) @ g
    fisher = np.real(pi_h * mid.T)
    fisher = 0.5 * (fisher + fisher.T)

    try:
        fisher_inv = hermitian_inverse(HermitianMatrix(fisher)).mat
    except NotPositiveDefinite as exc:
        raise SingularFisher(f"Fisher information not positive definite: {exc}") from exc
    if _cond_1norm(fisher, fisher_inv) > _FISHER_COND_MAX:
        raise SingularFisher(
            "Fisher information condition number exceeds 1e12 "
            "(near-coincident AoAs or vanishing target power)"
        )
    crb = s.noise_var_sense / (2.0 * s.snapshots) * np.real(fisher_inv)
    return 0.5 * (crb + crb.T)


def pmin_general(r: HermitianMatrix, r_delta: HermitianMatrix, snapshots: int) -> float:
    """Chernoff-style minimum error probability of the binary test between two
    zero-mean Gaussian snapshot models with covariances r and r_delta.

    Evaluates the semi-invariant moment generating function at p = 1/2,
        mu = L [ ln(|R||Rd|)/2 - ln|(R+Rd)/2| ],
        mu'' = 4L Tr{ ((R+Rd)^-1 (R-Rd))^2 },
    and returns Q(sqrt(mu'')/2) * exp(mu + mu''/8). Symmetric in (r, r_delta).
    """
    if r.n != r_delta.n:
        raise ValueError("covariance matrices must have matching dimension")
    if snapshots < 1:
        raise ValueError("snapshots must be >= 1")
    ld_r = log_det(r)
    ld_rd = log_det(r_delta)
    mid = HermitianMatrix((r.mat + r_delta.mat) / 2.0)
    ld_mid = log_det(mid)
    mu = snapshots * ((ld_r + ld_rd) / 2.0 - ld_mid)
    mu = min(mu, 0.0)  # mathematically <= 0; clip factorization rounding

    t = hermitian_solve(HermitianMatrix(r.mat + r_delta.mat), r.mat - r_delta.mat)
    mudd = 4.0 * snapshots * float(np.real(np.trace(t @ t)))
    mudd = max(mudd, 0.0)
    return q_times_exp(0.5 * math.sqrt(mudd), mu + mudd / 8.0)


def pmin_mainlobe(delta, crb: np.ndarray) -> float:
    """Small-offset error probability Q( 1/2 sqrt(delta^T CRB^-1 delta) )."""
    delta = np.asarray(delta, dtype=float)
    crb = np.asarray(crb, dtype=float)
    try:
        crb_inv = hermitian_inverse(HermitianMatrix(crb)).mat
    except NotPositiveDefinite as exc:
        raise SingularFisher(f"CRB matrix not invertible: {exc}") from exc
    quad = float(np.real(delta @ crb_inv @ delta))
    return q_times_exp(0.5 * math.sqrt(max(quad, 0.0)), 0.0)


def pmin_null(etas, m_rx: int, snapshots: int) -> float:
    """Error-probability floor at the beampattern nulls.

    With x_k = m_rx * eta_k:
        Q( sqrt(2L sum_k (x_k/(2+x_k))^2) )
        * exp( L sum_k [ ln(4(1+x_k)/(2+x_k)^2) + (x_k/(2+x_k))^2 ] ),
    assembled in log space so large-SNR values never underflow prematurely.
    """
    etas = np.asarray(list(etas), dtype=float)
    if np.any(etas < 0):
        raise ValueError("sensing SNRs must be >= 0")
    if m_rx < 1 or snapshots < 1:
        raise ValueError("m_rx and snapshots must be >= 1")
    x = m_rx * etas
    ratios = x / (2.0 + x)
    qarg = math.sqrt(2.0 * snapshots * float(np.sum(ratios**2)))
    expo = snapshots * float(
        np.sum(np.log(4.0 * (1.0 + x) / (2.0 + x) ** 2) + ratios**2)
    )
    return q_times_exp(qarg, expo)


def apriori_bound(k: int, zeta: float) -> float:
    """Prior-only MSE for K AoAs uniform over a width-zeta interval:
    K zeta^2 / ((K+1)^2 (K+2))."""
    if k < 1:
        raise ValueError("target count must be >= 1")
    if not (zeta > 0):
        raise ValueError("prior range must be > 0")
    return k * zeta**2 / ((k + 1) ** 2 * (k + 2))


def u_tilde(crb: np.ndarray, width: float, k: int) -> float:
    """Upper limit of the small-error Q-integral after the change of variables:
    u~ = K width^2 / (8 Tr{CRB}).

    width is the h-integration cutoff (radians); see mainlobe_width for the
    value the closed-form ZZB uses.
    """
    if not (width > 0):
        raise ValueError("width must be > 0")
    tr = float(np.trace(np.asarray(crb, dtype=float)))
    if not (tr > 0):
        raise ValueError("Tr{CRB} must be > 0")
    return k * width**2 / (8.0 * tr)


def mainlobe_width(m_rx: int, prior_range: float) -> float:
    """Transition width between the small-error region and the ambiguity floor:
    a single equivalent beamwidth 2/m_rx, capped by the prior support."""
    return min(prior_range, 2.0 / m_rx)


def zzb_closed(s: Scenario, w: Beamformer, allow_singular: bool = False) -> BoundReport:
    """Closed-form Ziv-Zakai bound
        ZZB = 2 P_min,n B_AP + Gamma_{3/2}(u~) Tr{CRB}/K
    together with all intermediate quantities.

    When the Fisher information is singular, raises SingularFisher unless
    allow_singular is set, in which case a degraded report carrying only the
    a priori term is returned (crb and u_tilde absent).
    """
    k = s.n_targets
    if k < 1:
        raise ValueError("zzb_closed needs at least one target")
    etas = [sensing_snr(t, w, s.noise_var_sense) for t in s.targets]
    p_null = pmin_null(etas, s.m_rx, s.snapshots)
    bap = apriori_bound(k, s.prior_range)
    try:
        crb = crb_stochastic(s, w)
    except SingularFisher:
        if not allow_singular:
            raise
        return BoundReport(
            crb=None, zzb=2.0 * p_null * bap, apb=bap, p_min_null=p_null, u_tilde=None
        )
    ut = u_tilde(crb, mainlobe_width(s.m_rx, s.prior_range), k)
    zzb = 2.0 * p_null * bap + reg_lower_gamma_3half(ut) * float(np.trace(crb)) / k
    return BoundReport(crb=crb, zzb=zzb, apb=bap, p_min_null=p_null, u_tilde=ut)


def _default_h_grid(zeta: float, n: int = 400) -> np.ndarray:
    upper = min(zeta, math.pi / 2.0 - 1e-9)
    return np.concatenate(([0.0], np.geomspace(upper * 1e-8, upper, n)))


def _refine(grid: np.ndarray) -> np.ndarray:
    mids = 0.5 * (grid[:-1] + grid[1:])
    return np.sort(np.concatenate([grid, mids]))


def zzb_numeric_oracle(
    s: Scenario,
    w: Beamformer,
    h_grid=None,
    delta_grid=(1.0, -1.0),
) -> float:
    """Brute-force single-target ZZB by direct integration.

    Evaluates  integral_0^zeta (1 - h/zeta) max_d P_min(d h) h dh  with the
    uniform-prior overlap kernel, the AoA fixed at the prior center for
    covariance construction, P_min from pmin_general on the exact covariance
    pair, and the trapezoid rule on h_grid. delta_grid holds the sign/scale
    multipliers over which the offset direction is maximized.

    Raises GridTooCoarse when one step of grid refinement (midpoint
    insertion) moves the result by more than 1%.
    """
    if s.n_targets != 1:
        raise ValueError("the numeric oracle is defined for single-target scenarios")
    zeta = s.prior_range
    if h_grid is None:
        h_grid = _default_h_grid(zeta)
    h_grid = np.asarray(h_grid, dtype=float)
    h_grid = np.unique(h_grid[(h_grid >= 0.0) & (h_grid <= zeta)])
    if h_grid.size < 3:
        raise GridTooCoarse("h grid must contain at least 3 points in [0, zeta]")

    p = target_effective_power(s.targets[0], w)
    center = 0.0  # prior center; P_min depends on the offset geometry only
    a0 = steering_vector(center, s.m_rx)
    sigma2 = s.noise_var_sense
    base = HermitianMatrix(p * np.outer(a0, a0.conj()) + sigma2 * np.eye(s.m_rx))

    def pmin_at(h: float) -> float:
        best = 0.0
        seen = False
        for mult in delta_grid:
            theta = center + float(mult) * h
            if abs(theta) >= math.pi / 2.0:
                continue
            seen = True
            a = steering_vector(theta, s.m_rx)
            shifted = HermitianMatrix(p * np.outer(a, a.conj()) + sigma2 * np.eye(s.m_rx))
            best = max(best, pmin_general(base, shifted, s.snapshots))
        if not seen:
            raise DomainError(f"no offset in delta_grid keeps h = {h!r} inside (-pi/2, pi/2)")
        return best

    def integral(grid: np.ndarray) -> float:
        vals = np.array(
            [0.0 if h == 0.0 else (1.0 - h / zeta) * pmin_at(h) * h for h in grid]
        )
        return float(np.trapezoid(vals, grid))

    coarse = integral(h_grid)
    fine = integral(_refine(h_grid))
    if abs(fine - coarse) > 0.01 * max(abs(fine), 1e-300):
        raise GridTooCoarse(
            f"refinement moved the ZZB integral by {abs(fine - coarse) / max(abs(fine), 1e-300):.2%}"
        )
    return fine
