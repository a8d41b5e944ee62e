"""
Riesz products for the Thue-Morse measure and the generalised Thue-Morse
family: factors, truncated densities, distribution functions, the rigorous
Thue-Morse bracket and the gTM scaling law.
"""
import csv
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .exceptions import ConfigurationError, UnderResolvedError

logger = logging.getLogger(__name__)

# points per unit needed for each period of the fastest oscillation
MIN_POINTS_PER_PERIOD = 8
DEFAULT_POINTS_PER_PERIOD = 16
# largest grid used by the self-similar evaluation
SCALED_GRID_POINTS = 2 ** 21

TM_ALPHA = -math.log2(math.pi ** 2 / 2)


def _check_pq(p, q):
    if int(p) != p or int(q) != q or p < 1 or q < 1:
        raise ConfigurationError(f"p and q must be integers >= 1, got p={p}, q={q}")
    return int(p), int(q)


def alpha(p, q, r):
    """Cosine coefficient alpha(p, q, r) of the gTM factor."""
    return p + q - r - 2 * min(p, q, r, p + q - r)


def theta(p, q, x):
    """
    gTM factor 1 + 2/(p+q) sum_r alpha(p,q,r) cos(2 pi r x).

    Negative values from rounding are clamped to zero.
    """
    p, q = _check_pq(p, q)
    b = p + q
    x = np.asarray(x, dtype=float)
    total = np.ones_like(x)
    for r in range(1, b):
        total = total + (2 / b) * alpha(p, q, r) * np.cos(2 * np.pi * r * x)
    return np.maximum(total, 0.0)


def theta_modulus(p, q, x):
    """Same factor as |sum_{j<p} z^j - sum_{p<=j<p+q} z^j|^2/(p+q), z = exp(2 pi i x)."""
    p, q = _check_pq(p, q)
    phase = 2 * np.pi * np.mod(np.asarray(x, dtype=float), 1.0)
    real = np.zeros_like(phase)
    imag = np.zeros_like(phase)
    for j in range(p + q):
        sign = 1.0 if j < p else -1.0
        real += sign * np.cos(j * phase)
        imag += sign * np.sin(j * phase)
    return (real * real + imag * imag) / (p + q)


def theta_at_zero(p, q):
    return Fraction((p - q) ** 2, p + q)


def theta_x2_coefficient(p, q):
    """Coefficient of (pi x)**2 in the small-x expansion of the factor."""
    p, q = _check_pq(p, q)
    d = p - q
    return Fraction(12 * p * p * q * q + d * d - d ** 4, 3 * (p + q))


def log_f_n(p, q, x, n):
    """log of prod_{m<n} theta(b**m x), evaluated factor by factor."""
    if n < 0:
        raise ConfigurationError(f"truncation order must be >= 0, got {n}")
    p, q = _check_pq(p, q)
    b = p + q
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    total = np.zeros_like(x)
    with np.errstate(divide='ignore'):
        for _ in range(n):
            total = total + np.log(theta_modulus(p, q, x))
            x = np.mod(b * x, 1.0)
    return total


def f_n(p, q, x, n):
    return np.exp(log_f_n(p, q, x, n))


# ==================== Thue-Morse Fourier coefficients ====================

@lru_cache(maxsize=None)
def eta(m):
    """Exact Thue-Morse coefficient eta(m) as a Fraction."""
    if m < 0:
        return eta(-m)
    if m == 0:
        return Fraction(1)
    if m == 1:
        return Fraction(-1, 3)
    if m % 2 == 0:
        return eta(m // 2)
    h = m // 2
    return -(eta(h) + eta(h + 1)) / 2


def eta_array(size):
    """Floating eta(0), ..., eta(size - 1) by blockwise doubling."""
    values = np.zeros(max(size, 2))
    values[0], values[1] = 1.0, -1.0 / 3.0
    filled = 2
    while filled < size:
        upper = min(2 * filled, len(values))
        even = np.arange(filled + (filled % 2), upper, 2)
        values[even] = values[even // 2]
        odd = np.arange(filled + 1 - (filled % 2), upper, 2)
        half = odd // 2
        values[odd] = -(values[half] + values[half + 1]) / 2
        filled = upper
    return values[:size]


def F_fourier(k, M):
    """
    Thue-Morse distribution function from its Fourier series.

    Args:
        k: 0 <= k <= 1
        M: number of terms

    Returns:
        (value, tail_estimate) where the estimate is the change of the
        partial sum between M/2 and M terms
    """
    if not 0 <= k <= 1:
        raise ConfigurationError(f"k must lie in [0, 1], got {k}")
    if M < 1:
        raise ConfigurationError(f"term count must be >= 1, got {M}")
    m = np.arange(1, M + 1)
    terms = eta_array(M + 1)[1:] / (m * np.pi) * np.sin(2 * np.pi * m * k)
    value = k + math.fsum(terms)
    half = k + math.fsum(terms[:M // 2])
    return value, abs(value - half)


def _simpson_intervals(length, grid):
    intervals = max(2, math.ceil(length * grid))
    return intervals + intervals % 2


def F_quadrature(p, q, k, n, grid=None):
    """
    Distribution function F_n(k) of the truncated density f_n by composite
    Simpson quadrature.

    Args:
        p, q: gTM parameters (1, 1 for Thue-Morse)
        k: upper limit in [0, 1]
        n: truncation order
        grid: points per unit length, at least 8 * (p+q)**n

    Returns:
        F_n(k)
    """
    p, q = _check_pq(p, q)
    if not 0 <= k <= 1:
        raise ConfigurationError(f"k must lie in [0, 1], got {k}")
    required = MIN_POINTS_PER_PERIOD * (p + q) ** n
    grid = grid or DEFAULT_POINTS_PER_PERIOD * (p + q) ** n
    if grid < required:
        raise UnderResolvedError(f"grid of {grid} points per unit under-resolves f_{n}; need {required}", required)
    if k == 0:
        return 0.0
    x = np.linspace(0.0, k, _simpson_intervals(k, grid) + 1)
    return float(simpson(f_n(p, q, x, n), x=x))


def _log_integral(log_values, x):
    shift = np.max(log_values)
    if not np.isfinite(shift):
        return float('-inf')
    return shift + math.log(simpson(np.exp(log_values - shift), x=x))


@lru_cache(maxsize=2)
def _truncated_measure(p, q):
    b = p + q
    J = int(math.floor(math.log(SCALED_GRID_POINTS / MIN_POINTS_PER_PERIOD) / math.log(b)))
    y = np.linspace(0.0, 1.0, SCALED_GRID_POINTS + 1)
    return y, log_f_n(p, q, y, J), J


def F_scaled(p, q, n):
    """
    log F(b**-n) from the self-similarity F(b**-n) = b**-n int_0^1 f_n(y/b**n) dmu(y),
    with mu replaced by its truncation f_J on the finest affordable grid.

    Returns:
        (log_value, J)
    """
    p, q = _check_pq(p, q)
    if n < 0:
        raise ConfigurationError(f"n must be >= 0, got {n}")
    b = p + q
    y, log_measure, J = _truncated_measure(p, q)
    # f_n(y/b**n) = prod_{j=1..n} theta(y/b**j)
    log_g = np.zeros_like(y)
    with np.errstate(divide='ignore'):
        for j in range(1, n + 1):
            log_g = log_g + np.log(theta_modulus(p, q, y / b ** j))
    log_value = -n * math.log(b) + _log_integral(log_g + log_measure, y)
    return log_value, J


@dataclass
class DistributionSamples:
    """Samples (k, F(k)) of one distribution function."""
    k: np.ndarray
    F: np.ndarray
    method: str
    n_trunc: int

    def is_monotone(self, tol=1e-12):
        return bool(np.all(np.diff(self.F) >= -tol))

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['k', 'F', 'method', 'n_trunc'])
        for k, value in zip(self.k, self.F):
            writer.writerow([f"{k:.17g}", f"{value:.17g}", self.method, self.n_trunc])


def distribution(p, q, k_values, n, method='quadrature', M=None):
    """F at several k by one of the methods fourier | quadrature."""
    k_values = np.asarray(k_values, dtype=float)
    if method == 'fourier':
        if (p, q) != (1, 1):
            raise ConfigurationError("the Fourier series is available for Thue-Morse only")
        M = M or 2 ** n
        values = [F_fourier(k, M)[0] for k in k_values]
        return DistributionSamples(k_values, np.array(values), method, M)
    if method == 'quadrature':
        p, q = _check_pq(p, q)
        upper = float(np.max(k_values)) if len(k_values) else 0.0
        grid = DEFAULT_POINTS_PER_PERIOD * (p + q) ** n
        x = np.linspace(0.0, upper, _simpson_intervals(upper, grid) + 1)
        density = f_n(p, q, x, n)
        values = [float(simpson(density[x <= k], x=x[x <= k])) if k > 0 else 0.0 for k in k_values]
        return DistributionSamples(k_values, np.array(values), method, n)
    raise ConfigurationError(f"unknown method {method!r}; use fourier or quadrature")


# ==================== Thue-Morse bounds ====================

@dataclass(frozen=True)
class TMBounds:
    n: int
    log_lower: float
    log_upper: float

    @property
    def lower(self):
        return math.exp(self.log_lower)

    @property
    def upper(self):
        return math.exp(self.log_upper)


def _log_sin_squared(j):
    return 2 * math.log(math.sin(math.pi / 2 ** j))


def tm_bounds(n):
    """
    2**-n f_n(2**-n-1) <= F(2**-n) <= 2**-n f_n(2**-n), in log space.

    With f_n(2**-m) = prod_{j=m-n+1..m} 2 sin(pi/2**j)**2 the bracket is
    prod_{j=2..n+1} sin(pi/2**j)**2 <= F <= prod_{j=1..n} sin(pi/2**j)**2.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    log_upper = math.fsum(_log_sin_squared(j) for j in range(1, n + 1))
    log_lower = math.fsum(_log_sin_squared(j) for j in range(2, n + 2))
    return TMBounds(n, log_lower, log_upper)


def tm_beta(N=100_000):
    """beta = 1/4 - (2/pi**2) sum_{m<N} eta(2m+1)/(2m+1)**2."""
    odd = np.arange(1, 2 * N, 2)
    values = eta_array(2 * N)[odd]
    return 0.25 - 2 / math.pi ** 2 * math.fsum(values / odd.astype(float) ** 2)


def tm_improved_lower(n, N=100_000, beta=None):
    """Improved lower bound 2**-n f_{n-1}(2**(1-n) beta), returned in log space."""
    if n < 2:
        raise ConfigurationError(f"n must be >= 2, got {n}")
    beta = tm_beta(N) if beta is None else beta
    return -n * math.log(2) + float(log_f_n(1, 1, 2.0 ** (1 - n) * beta, n - 1))


@dataclass(frozen=True)
class ConstantSequence:
    values: tuple
    limit: float
    stabilised: bool


def _stabilise(values, tol):
    for i in range(1, len(values)):
        if abs(values[i] - values[i - 1]) < tol:
            return ConstantSequence(tuple(values), values[-1], True)
    return ConstantSequence(tuple(values), values[-1], False)


def tm_upper_constants(n_max=30, tol=1e-5):
    """upper_n * 2**(n**2) * (2/pi**2)**n, converging to c."""
    values = [
        math.exp(tm_bounds(n).log_upper + n * n * math.log(2) + n * math.log(2 / math.pi ** 2))
        for n in range(1, n_max + 1)
    ]
    return _stabilise(values, tol)


def tm_lower_constants(n_max=30, tol=1e-5):
    """lower_n * 2**(n**2) * (8/pi**2)**n, converging to pi**2 c / 4."""
    values = [
        math.exp(tm_bounds(n).log_lower + n * n * math.log(2) + n * math.log(8 / math.pi ** 2))
        for n in range(1, n_max + 1)
    ]
    return _stabilise(values, tol)


def tm_prefactor_exponent(n_values=range(4, 13)):
    """
    Empirical s in F(k) ~ k**(alpha + s) exp(-log(k)**2/log 2), from the
    self-similar evaluation at k = 2**-n. Reported, not asserted.
    """
    n_values = np.asarray(list(n_values))
    log_k = -n_values * math.log(2)
    log_F = np.array([F_scaled(1, 1, int(n))[0] for n in n_values])
    residual = log_F - TM_ALPHA * log_k + log_k ** 2 / math.log(2)
    slope, _ = np.polyfit(log_k, residual, 1)
    return float(slope)


def tm_bound_report(n, N=100_000):
    """Plain-data bracket record for JSON output."""
    bounds = tm_bounds(n)
    improved = tm_improved_lower(n, N) if n >= 2 else None
    log_estimate, _ = F_scaled(1, 1, n)
    return {
        'n': n,
        'lower': bounds.lower,
        'improved_lower': math.exp(improved) if improved is not None else None,
        'upper': bounds.upper,
        'F_est': math.exp(log_estimate),
        'log_lower': bounds.log_lower,
        'log_upper': bounds.log_upper,
        'log_F_est': log_estimate,
    }


def gtm_exponent(p, q):
    """
    Small-k exponent 2 - 2 log|p-q| / log(p+q) of the gTM distribution
    function; math.inf when p == q (faster than any power).
    """
    p, q = _check_pq(p, q)
    if p == q:
        return math.inf
    return 2 - 2 * math.log(abs(p - q)) / math.log(p + q)
