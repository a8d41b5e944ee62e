"""
Stochastic point processes and lattice gases: analytic Z(k), Monte Carlo
realisations and the periodogram estimators used to cross-check every other
producer.
"""
import csv
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from numpy.random import Generator, Philox, SeedSequence
from scipy import integrate

from .conf import get_setting
from .exceptions import ConfigurationError, UnderResolvedError
from .substitution import bernoullise, rudin_shapiro_weights

logger = logging.getLogger(__name__)

VARIANTS = ('poisson', 'lattice', 'bernoulli', 'rmt', 'markov', 'random_tiling', 'rudin_shapiro')
RMT_BETAS = (1, 2, 4)
CIC_POINTS_PER_PERIOD = 8
DIRECT_CHUNK = 2 ** 22


def _check_probability(name, value):
    if not 0 <= value <= 1:
        raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


@dataclass(frozen=True)
class AnalyticModel:
    """
    One of the stochastic systems with a closed-form diffraction.

    Only the fields relevant to the variant are set; use the factory
    classmethods, which validate the parameters.
    """
    variant: str
    p: float = None
    q: float = None
    u: float = None
    v: float = None
    beta: int = None
    weighting: str = None

    @classmethod
    def poisson(cls):
        return cls('poisson')

    @classmethod
    def lattice(cls):
        return cls('lattice')

    @classmethod
    def bernoulli(cls, p, weighting='01'):
        if weighting not in ('01', 'pm'):
            raise ConfigurationError(f"weighting must be '01' or 'pm', got {weighting!r}")
        return cls('bernoulli', p=_check_probability('p', p), weighting=weighting)

    @classmethod
    def rmt(cls, beta):
        if beta not in RMT_BETAS:
            raise ConfigurationError(f"beta must be one of {RMT_BETAS}, got {beta}")
        return cls('rmt', beta=int(beta))

    @classmethod
    def markov(cls, p, q):
        p, q = _check_probability('p', p), _check_probability('q', q)
        if not 0 < p + q < 2:
            raise ConfigurationError(f"the Markov chain needs 0 < p + q < 2, got p + q = {p + q}")
        return cls('markov', p=p, q=q)

    @classmethod
    def random_tiling(cls, u, v, p):
        if u <= 0 or v <= 0:
            raise ConfigurationError(f"tile lengths must be positive, got u={u}, v={v}")
        p = _check_probability('p', p)
        return cls('random_tiling', p=p, q=1 - p, u=float(u), v=float(v))

    @classmethod
    def rudin_shapiro(cls, p=0.0):
        return cls('rudin_shapiro', p=_check_probability('p', p))

    @property
    def r(self):
        if self.variant != 'markov':
            raise ConfigurationError(f"r is defined for the Markov chain only, not {self.variant}")
        return self.p + self.q - 1

    @property
    def rho(self):
        """Occupation density of the lattice gases."""
        if self.variant == 'markov':
            return (1 - self.p) / (2 - self.p - self.q)
        if self.variant == 'bernoulli':
            return self.p
        raise ConfigurationError(f"rho is defined for lattice gases only, not {self.variant}")

    @property
    def label(self):
        params = [
            f"{name}={getattr(self, name):g}" if isinstance(getattr(self, name), float)
            else f"{name}={getattr(self, name)}"
            for name in ('p', 'q', 'u', 'v', 'beta', 'weighting')
            if getattr(self, name) is not None
        ]
        return f"{self.variant}({','.join(params)})" if params else self.variant

    @property
    def on_lattice(self):
        return self.variant in ('lattice', 'bernoulli', 'markov', 'rudin_shapiro')


def markov_density(p, q, k):
    """Absolutely continuous diffraction density of the Markov lattice gas."""
    r = p + q - 1
    k = np.asarray(k, dtype=float)
    numerator = (1 - p) * (1 - q) * (1 + r)
    return numerator / ((1 - r) * (1 - 2 * r * np.cos(2 * np.pi * k) + r * r))


def markov_expansion(p, q, k):
    """Small-k series g(0)*(k - (4 pi^2/3) r/(1-r)^2 k^3)."""
    r = p + q - 1
    g0 = (1 - p) * (1 - q) * (1 + r) / (1 - r) ** 3
    return g0 * (k - 4 * math.pi ** 2 / 3 * r / (1 - r) ** 2 * k ** 3)


def _rmt_density_scalar(beta, k):
    if k < 0:
        raise ConfigurationError(f"k must be >= 0, got {k}")
    if beta == 2:
        return min(k, 1.0)
    if beta == 1:
        if k <= 1:
            return 2 * k - k * math.log1p(2 * k)
        return 2 - k * math.log((2 * k + 1) / (2 * k - 1))
    if k > 2:
        return 1.0
    if k == 1:
        return math.inf
    return k / 2 - k / 4 * math.log(abs(1 - k))


def rmt_density(beta, k):
    """
    Structure-factor density of the circular beta ensembles at unit density.

    beta=1: 2k - k log(1+2k) up to 1, then 2 - k log((2k+1)/(2k-1));
    beta=2: min(k, 1); beta=4: k/2 - (k/4) log|1-k| up to 2, then 1.
    The beta=4 density has an integrable logarithmic singularity at k = 1.
    """
    if beta not in RMT_BETAS:
        raise ConfigurationError(f"beta must be one of {RMT_BETAS}, got {beta}")
    if np.ndim(k) == 0:
        return _rmt_density_scalar(beta, float(k))
    return np.array([_rmt_density_scalar(beta, float(x)) for x in np.ravel(k)]).reshape(np.shape(k))


def rmt_expansion(beta, k):
    """Leading terms of the integrated beta-ensemble densities."""
    if beta == 1:
        return k ** 2 - 2 / 3 * k ** 3
    if beta == 2:
        return k ** 2 / 2
    if beta == 4:
        return k ** 2 / 4 + k ** 3 / 12
    raise ConfigurationError(f"beta must be one of {RMT_BETAS}, got {beta}")


def random_tiling_coefficients(u, v, p):
    """(c1, c3) of Z(k) = c1*(k + c3*k**3) for the binary random tiling."""
    q = 1 - p
    mean = p * u + q * v
    c1 = p * q * (u - v) ** 2 / mean ** 3
    second = p * u * u + q * v * v
    c3 = math.pi ** 2 / 9 * (u * u * v * v - 2 * u * v * second) / (p * q * (u - v) ** 2 - second)
    return c1, c3


def density(model, k):
    """Absolutely continuous density of the diffraction at k."""
    if model.variant in ('poisson', 'rudin_shapiro'):
        return 1.0
    if model.variant == 'lattice':
        return 0.0
    if model.variant == 'bernoulli':
        scale = 1 if model.weighting == '01' else 4
        return scale * model.p * (1 - model.p)
    if model.variant == 'markov':
        return float(markov_density(model.p, model.q, k))
    if model.variant == 'rmt':
        return rmt_density(model.beta, k)
    c1, c3 = random_tiling_coefficients(model.u, model.v, model.p)
    return c1 * (1 + 3 * c3 * k * k)


def bragg_parts(model, k):
    """Total Bragg intensity on (0, k]; lattice gases carry rho**2 per integer."""
    peaks = math.floor(k)
    if model.variant == 'lattice':
        return float(peaks)
    if model.variant == 'markov':
        return model.rho ** 2 * peaks
    if model.variant == 'bernoulli':
        height = model.p ** 2 if model.weighting == '01' else (2 * model.p - 1) ** 2
        return height * peaks
    return 0.0


def z_analytic(model, k):
    """
    Z(k) = absolutely continuous mass on (0, k] plus Bragg parts.

    Markov and random-matrix models integrate their densities by adaptive
    quadrature; the random tiling uses its small-k series.
    """
    if not k > 0:
        raise ConfigurationError(f"k must be positive, got {k}")
    k = float(k)
    if model.variant == 'random_tiling':
        c1, c3 = random_tiling_coefficients(model.u, model.v, model.p)
        return c1 * (k + c3 * k ** 3)
    if model.variant in ('markov', 'rmt'):
        breaks = [b for b in (1.0, 2.0) if b < k]
        value, error = integrate.quad(
            lambda x: density(model, x), 0.0, k,
            points=breaks or None, epsabs=1e-14, epsrel=1e-12, limit=200,
        )
        logger.debug("%s: quadrature to %g, error estimate %.2e", model.label, k, error)
    else:
        value = density(model, k) * k
    return value + bragg_parts(model, k)


def write_analytic_csv(model, k_values, handle):
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(['k', 'Z', 'model'])
    for k in k_values:
        writer.writerow([f"{k:.17g}", f"{z_analytic(model, k):.17g}", model.label])


def make_rng(seed=None, stream=0):
    """Counter-based generator keyed by (seed, stream)."""
    seed = get_setting('SEED') if seed is None else seed
    if int(seed) < 0 or int(stream) < 0:
        raise ConfigurationError(f"seed and stream must be non-negative, got {seed}, {stream}")
    return Generator(Philox(SeedSequence(int(seed), spawn_key=(int(stream),))))


@dataclass(frozen=True, eq=False)
class WeightedRealisation:
    positions: np.ndarray
    weights: np.ndarray
    R: float
    seed: int = None
    model: str = ''
    on_lattice: bool = False

    def __len__(self):
        return len(self.positions)

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['position', 'weight'])
        for x, w in zip(self.positions, self.weights):
            writer.writerow([f"{x:.17g}", f"{w:.17g}"])

    @classmethod
    def from_patch(cls, patch, weights=None):
        """Unit (or given) weights on the points of a generated patch."""
        weights = np.ones(len(patch)) if weights is None else np.asarray(weights, dtype=float)
        return cls(np.asarray(patch.positions, dtype=float), weights, float(patch.radius), model='patch')


def _sites(R):
    half = math.floor(R)
    return np.arange(-half, half + 1, dtype=np.int64)


def _markov_states(model, size, rng):
    """Occupation of `size` consecutive sites, started from the stationary law."""
    state = int(rng.random() < model.rho)
    runs, states, total = [], [], 0
    batch = 64
    while total < size:
        parity = (state + np.arange(batch)) % 2
        stay = np.where(parity == 0, model.p, model.q)
        lengths = np.where(stay >= 1, size, rng.geometric(np.where(stay >= 1, 0.5, 1 - stay)))
        runs.append(lengths)
        states.append(parity)
        total += int(lengths.sum())
        state = (state + batch) % 2
        batch *= 2
    return np.repeat(np.concatenate(states), np.concatenate(runs))[:size]


def _tiling_endpoints(model, R, rng):
    count = math.ceil(R / min(model.u, model.v)) + 2
    right = np.where(rng.random(count) < model.p, model.u, model.v)
    left = np.where(rng.random(count) < model.p, model.u, model.v)
    points = np.concatenate([-np.cumsum(left)[::-1], [0.0], np.cumsum(right)[:-1]])
    return points[np.abs(points) <= R]


def sample(model, R, seed=None, stream=0):
    """
    One realisation of the model on [-R, R].

    Lattice gases live on the integer sites; only occupied sites are stored
    for 0/1 weights.
    """
    if not R > 0:
        raise ConfigurationError(f"R must be positive, got {R}")
    rng = make_rng(seed, stream)
    variant = model.variant
    if variant == 'rmt':
        raise ConfigurationError("random-matrix ensembles are available as densities only")
    if variant == 'poisson':
        count = rng.poisson(2 * R)
        positions = np.sort(rng.uniform(-R, R, count))
        weights = np.ones(count)
    elif variant == 'random_tiling':
        positions = _tiling_endpoints(model, R, rng)
        weights = np.ones(len(positions))
    else:
        sites = _sites(R)
        if variant == 'lattice':
            weights = np.ones(len(sites))
        elif variant == 'bernoulli' and model.weighting == 'pm':
            weights = np.where(rng.random(len(sites)) < model.p, 1.0, -1.0)
        elif variant == 'bernoulli':
            weights = (rng.random(len(sites)) < model.p).astype(float)
        elif variant == 'markov':
            weights = _markov_states(model, len(sites), rng).astype(float)
        else:
            weights = bernoullise(rudin_shapiro_weights(len(sites)), model.p, rng).astype(float)
        if variant in ('bernoulli', 'markov') and model.weighting != 'pm':
            keep = weights != 0
            sites, weights = sites[keep], weights[keep]
        positions = sites.astype(float)
    logger.info("%s: %d points on [-%g, %g] (seed %s)", model.label, len(positions), R, R, seed)
    return WeightedRealisation(positions, weights, float(R), seed, model.label, model.on_lattice)


def empirical_diffraction(real, k_grid):
    """Direct periodogram |sum w exp(-2 pi i k x)|**2 / (2R) at each k."""
    k_grid = np.atleast_1d(np.asarray(k_grid, dtype=float))
    x, w = real.positions, real.weights
    chunk = max(1, DIRECT_CHUNK // max(len(x), 1))
    values = np.empty(len(k_grid))
    for start in range(0, len(k_grid), chunk):
        k = k_grid[start:start + chunk]
        phase = 2 * np.pi * np.outer(k, x)
        re = np.cos(phase) @ w
        im = np.sin(phase) @ w
        values[start:start + chunk] = (re * re + im * im) / (2 * real.R)
    return list(zip(k_grid.tolist(), values.tolist()))


def bragg_intensity(real, k):
    """|sum w exp(-2 pi i k x)|**2 / (2R)**2, the peak height estimate."""
    [(_, value)] = empirical_diffraction(real, [k])
    return value / (2 * real.R)


@dataclass(frozen=True, eq=False)
class Periodogram:
    k: np.ndarray
    intensity: np.ndarray
    R: float
    spacing: float

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['k', 'intensity'])
        for k, value in zip(self.k, self.intensity):
            writer.writerow([f"{k:.17g}", f"{value:.17g}"])


def _lattice_field(real):
    sites = _sites(real.R)
    field = np.zeros(len(sites))
    index = np.rint(real.positions).astype(np.int64) - sites[0]
    np.add.at(field, index, real.weights)
    return field


def _cic_field(real, k_max):
    """Cloud-in-cell assignment on a periodic grid over [-R, R)."""
    cells = max(16, math.ceil(2 * real.R * CIC_POINTS_PER_PERIOD * k_max))
    h = 2 * real.R / cells
    t = (real.positions + real.R) / h
    left = np.floor(t).astype(np.int64)
    frac = t - left
    field = np.bincount(left % cells, weights=real.weights * (1 - frac), minlength=cells)
    field += np.bincount((left + 1) % cells, weights=real.weights * frac, minlength=cells)
    return field, h


def periodogram(real, k_max=0.5):
    """
    Mean-subtracted periodogram on the natural Fourier grid up to k_max.

    Lattice realisations are transformed site by site; off-lattice points are
    gridded by cloud-in-cell and the window's sinc**4 is divided out. The
    mean subtraction removes the central peak (and, on the lattice, every
    integer Bragg peak).
    """
    if not k_max > 0:
        raise ConfigurationError(f"k_max must be positive, got {k_max}")
    if real.on_lattice:
        field = _lattice_field(real)
        field -= field.mean()
        length = len(field)
        coefficients = scipy.fft.fft(field)
        count = math.floor(k_max * length)
        j = np.arange(count + 1)
        amplitude = np.abs(coefficients[j % length]) ** 2
        spacing = 1 / length
    else:
        field, h = _cic_field(real, k_max)
        field -= field.mean()
        coefficients = scipy.fft.rfft(field)
        spacing = 1 / (2 * real.R)
        count = min(math.floor(k_max * 2 * real.R), len(coefficients) - 1)
        j = np.arange(count + 1)
        amplitude = np.abs(coefficients[j]) ** 2 / np.sinc(j * spacing * h) ** 4
    k = j * spacing
    return Periodogram(k, amplitude / (2 * real.R), real.R, spacing)


@dataclass(frozen=True)
class EmpiricalZ:
    k: float
    value: float
    stderr: float
    bins: int


def empirical_Z(real, k, bins=None):
    """
    Trapezoid integral of the periodogram over (0, k] minus the central zone
    of total width 4/(2R).

    The ordinates are the natural Fourier frequencies; `bins` only states the
    resolution the caller expects and must reach one bin per 1/(2R). The
    standard error treats ordinates as independent exponentials.
    """
    if not k > 0:
        raise ConfigurationError(f"k must be positive, got {k}")
    required = math.ceil(2 * real.R * k)
    if bins is not None and bins < required:
        raise UnderResolvedError(
            f"{bins} bins on (0, {k:g}] do not resolve 1/(2R) = {1 / (2 * real.R):.3g}", required,
        )
    grid = periodogram(real, k)
    keep = (grid.k > 2 / (2 * real.R)) & (grid.k <= k)
    ordinates = grid.intensity[keep]
    if len(ordinates) < 2:
        raise UnderResolvedError(f"no ordinates left in (0, {k:g}] at R = {real.R:g}", required)
    value = float(integrate.trapezoid(ordinates, grid.k[keep]))
    stderr = grid.spacing * math.sqrt(float(np.sum(ordinates ** 2)))
    return EmpiricalZ(float(k), value, stderr, len(ordinates))
