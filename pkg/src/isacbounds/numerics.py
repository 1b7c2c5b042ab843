"""Small dense Hermitian linear algebra and the special functions used by the bounds.

Everything here is self-contained: factorizations are written out so the
positive-definiteness contract (pivot threshold) is explicit, and the special
functions are evaluated by series / continued fractions rather than delegated
to an external numerical library.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NotPositiveDefinite

_EULER_GAMMA = 0.5772156649015329
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_GAMMA_3_HALF = math.sqrt(math.pi) / 2.0


class HermitianMatrix:
    """Immutable N x N complex Hermitian matrix.

    Construction averages the input with its conjugate transpose, so the
    stored matrix is exactly Hermitian even when the input carries
    asymmetric rounding noise.
    """

    __slots__ = ("_m",)

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("matrix must be at least 1 x 1")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self._m = m

    @property
    def mat(self) -> np.ndarray:
        """Read-only ndarray view of the entries."""
        return self._m

    @property
    def n(self) -> int:
        return self._m.shape[0]

    def __repr__(self):  # pragma: no cover
        return f"HermitianMatrix(n={self.n})"


# Relative pivot threshold for declaring a matrix not positive definite.
_PIVOT_RTOL = 1e-14


def cholesky_lower(m: HermitianMatrix) -> np.ndarray:
    """Lower-triangular L with L L^H = m, for positive definite m.

    Raises NotPositiveDefinite when a pivot falls at or below
    1e-14 times the largest diagonal entry.
    """
    a = m.mat
    n = m.n
    tol = _PIVOT_RTOL * float(np.max(np.real(np.diag(a))))
    low = np.zeros((n, n), dtype=complex)
    for j in range(n):
        d = float(np.real(a[j, j])) - float(np.real(low[j, :j] @ low[j, :j].conj()))
        if d <= tol:
            raise NotPositiveDefinite(
                f"pivot {d:.3e} at index {j} is <= {tol:.3e} (matrix not PD)"
            )
        low[j, j] = math.sqrt(d)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j].conj()) / low[j, j]
    return low


def _solve_lower(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve low @ y = b by forward substitution (b may be a matrix)."""
    n = low.shape[0]
    y = np.array(b, dtype=complex)
    for i in range(n):
        if i:
            y[i] -= low[i, :i] @ y[:i]
        y[i] /= low[i, i]
    return y


def _solve_upper_from_lower(low: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve low^H @ x = b by back substitution."""
    n = low.shape[0]
    x = np.array(b, dtype=complex)
    for i in reversed(range(n)):
        if i + 1 < n:
            x[i] -= low[i + 1 :, i].conj() @ x[i + 1 :]
        x[i] /= low[i, i].conj()
    return x


def hermitian_solve(m: HermitianMatrix, b: np.ndarray) -> np.ndarray:
    """Solve m @ x = b for positive definite m."""
    low = cholesky_lower(m)
    return _solve_upper_from_lower(low, _solve_lower(low, b))


def hermitian_inverse(m: HermitianMatrix) -> HermitianMatrix:
    """Inverse of a positive definite Hermitian matrix."""
    x = hermitian_solve(m, np.eye(m.n, dtype=complex))
    return HermitianMatrix(x)


def log_det(m: HermitianMatrix) -> float:
    """Natural log of the determinant of a positive definite Hermitian matrix.

    Computed as the sum of log pivots of the Cholesky factorization, which
    stays accurate for the well-conditioned covariance matrices in scope.
    """
    low = cholesky_lower(m)
    return 2.0 * float(np.sum(np.log(np.real(np.diag(low)))))


def q_function(x: float) -> float:
    """Right tail of the standard normal, via the complementary error function."""
    if not math.isfinite(x):
        raise DomainError(f"q_function requires finite x, got {x!r}")
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def log_q_function(x: float) -> float:
    """log(Q(x)), stable for large x where Q underflows.

    Uses the asymptotic expansion Q(x) ~ phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...)
    beyond x = 25; below that the direct value is exact enough.
    """
    if not math.isfinite(x):
        raise DomainError(f"log_q_function requires finite x, got {x!r}")
    if x < 25.0:
        return math.log(q_function(x))
    inv2 = 1.0 / (x * x)
    series = -inv2 * (1.0 - inv2 * (3.0 - inv2 * (15.0 - inv2 * 105.0)))
    return -0.5 * x * x - math.log(x) - _LOG_SQRT_2PI + math.log1p(series)


def reg_lower_gamma_3half(u: float) -> float:
    """Regularized lower incomplete gamma P(3/2, u).

    Series representation below u = 1 (avoids the erf cancellation), the
    closed form erf(sqrt(u)) - 2/sqrt(pi) * sqrt(u) * exp(-u) above.
    """
    if u < 0 or not math.isfinite(u):
        raise DomainError(f"reg_lower_gamma_3half requires u >= 0, got {u!r}")
    if u == 0.0:
        return 0.0
    if u < 1.0:
        # P(a,u) = u^a e^-u / Gamma(a) * sum_n u^n / (a (a+1) ... (a+n))
        term = 1.0 / 1.5
        total = term
        n = 0
        while True:
            n += 1
            term *= u / (1.5 + n)
            total += term
            if term < 1e-17 * total:
                break
        return u ** 1.5 * math.exp(-u) * total / _GAMMA_3_HALF
    value = math.erf(math.sqrt(u)) - (2.0 / math.sqrt(math.pi)) * math.sqrt(u) * math.exp(-u)
    return min(value, 1.0)


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
    total = -_EULER_GAMMA - math.log(x)
    term = 1.0
    for k in range(1, 80):
        term *= -x / k
        delta = -term / k
        total += delta
        if abs(delta) < 1e-17 * abs(total):
            break
    return total


def _e1_cf_scaled(x: float) -> float:
    # Continued fraction for e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))),
    # modified Lentz iteration.
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 300):
        a = -float(i * i)
        b += 2.0
        d = a * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    return h  # converged to machine precision long before 300 terms in practice


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = integral_x^inf e^-t / t dt, x > 0.

    Series for x <= 1, continued fraction for x > 1. Underflow-safe: for
    very large x the result degrades gracefully to 0 like e^-x / x.
    """
    if not (x > 0) or not math.isfinite(x):
        raise DomainError(f"exp_integral_e1 requires x > 0, got {x!r}")
    if x <= 1.0:
        return _e1_series(x)
    if x > 700.0:
        return 0.0
    return math.exp(-x) * _e1_cf_scaled(x)


def exp_scaled_e1(x: float) -> float:
    """e^x * E1(x), stable for large x (tends to 1/x without under/overflow)."""
    if not (x > 0) or not math.isfinite(x):
        raise DomainError(f"exp_scaled_e1 requires x > 0, got {x!r}")
    if x <= 1.0:
        return math.exp(x) * _e1_series(x)
    return _e1_cf_scaled(x)


def q_times_exp(qarg: float, exponent: float) -> float:
    """Q(qarg) * exp(exponent), assembled in log space when needed.

    Direct evaluation is used whenever safe so that exact identities
    (Q(0) * e^0 = 0.5) survive to the bit level.
    """
    if qarg < 30.0 and abs(exponent) < 700.0:
        return q_function(qarg) * math.exp(exponent)
    z = log_q_function(qarg) + exponent
    return math.exp(z) if z > -745.0 else 0.0
