"""
Exact pair-correlation renormalisation for the Fibonacci inflation, Fourier
matrix cocycles, and predicted versus measured hyperuniformity exponents.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import AlgebraicNumber, QuadraticOrder, lyapunov_spectrum
from .conf import get_setting
from .exceptions import ConfigurationError, ConvergenceError

logger = logging.getLogger(__name__)

# type pairs in table order
PAIRS = ('aa', 'ab', 'ba', 'bb')


@dataclass(frozen=True, eq=False)
class PairCorrelationTable:
    """
    Pair correlation coefficients nu_ij(z) of a binary point set.

    Entries are stored as parallel arrays: pair index into PAIRS, and the
    coefficients (a, b) of z = a + b*tau.
    """
    pair: np.ndarray
    za: np.ndarray
    zb: np.ndarray
    values: np.ndarray
    radius: float
    order: QuadraticOrder = field(default_factory=QuadraticOrder.golden)

    @classmethod
    def seed(cls, seed_freq, radius):
        order = QuadraticOrder.golden()
        return cls(
            pair=np.array([0, 3]),
            za=np.zeros(2, dtype=np.int64),
            zb=np.zeros(2, dtype=np.int64),
            values=np.array([seed_freq, seed_freq / order.theta]),
            radius=float(radius),
            order=order,
        )

    @classmethod
    def zero(cls, radius):
        empty = np.zeros(0, dtype=np.int64)
        return cls(empty, empty, empty, np.zeros(0), float(radius))

    def __len__(self):
        return len(self.values)

    @property
    def distances(self):
        return self.za + self.zb * self.order.theta

    @cached_property
    def _lookup(self):
        return self.as_dict()

    def as_dict(self):
        return {
            (PAIRS[p], int(a), int(b)): float(v)
            for p, a, b, v in zip(self.pair, self.za, self.zb, self.values)
        }

    def value(self, pair, z):
        """nu_pair(z) for z in Z[tau]; zero off the support."""
        if isinstance(z, int):
            z = self.order.element(z)
        if not isinstance(z, AlgebraicNumber) or z.order != self.order:
            raise ConfigurationError(f"distance {z!r} is not an element of {self.order}")
        return self._lookup.get((pair, z.a, z.b), 0.0)

    def eta(self, z, density):
        """Autocorrelation coefficient eta(z) = dens * sum_ij nu_ij(z)."""
        return density * sum(self.value(pair, z) for pair in PAIRS)

    def single_letter_frequencies(self):
        return self.value('aa', 0), self.value('bb', 0)


def _combine(pair, za, zb, values, radius, order):
    """Merge duplicate keys and drop entries beyond the support radius."""
    inside = np.abs(za + zb * order.theta) <= radius + 1e-9
    pair, za, zb, values = pair[inside], za[inside], zb[inside], values[inside]
    if len(values) == 0:
        return PairCorrelationTable.zero(radius)
    keys = np.stack([pair, za, zb], axis=1)
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    summed = np.zeros(len(unique))
    np.add.at(summed, inverse.ravel(), values)
    return PairCorrelationTable(unique[:, 0], unique[:, 1], unique[:, 2], summed, radius, order)


def renorm_step(table):
    """
    One application of the Fibonacci renormalisation equations.

    Inflation puts an a-tile at 0 and a b-tile at tau inside an inflated
    a-tile, and an a-tile at 0 inside an inflated b-tile. A pair at parent
    distance y therefore feeds distances tau*y and tau*(y +- 1), each with
    weight 1/tau.

    Args:
        table: PairCorrelationTable over Z[tau]

    Returns:
        PairCorrelationTable on the same support radius
    """
    order = table.order
    if order != QuadraticOrder.golden():
        raise ConfigurationError(f"the Fibonacci equations need Z[tau], got {order}")
    t, n = order.trace, order.norm
    pair, a, b, v = table.pair, table.za, table.zb, table.values / order.theta
    # tau * (a + b*tau) = b*n + (a + b*t)*tau
    ta, tb = b * n, a + b * t

    is_aa, is_ab, is_ba = pair == 0, pair == 1, pair == 2
    new_pair = [np.zeros_like(pair), np.ones_like(pair[is_aa | is_ba]),
                np.full_like(pair[is_aa | is_ab], 2), np.full_like(pair[is_aa], 3)]
    # tau * (y +- 1) = tau*y +- (0 + 1*tau)
    new_a = [ta, ta[is_aa | is_ba], ta[is_aa | is_ab], ta[is_aa]]
    new_b = [tb, tb[is_aa | is_ba] + 1, tb[is_aa | is_ab] - 1, tb[is_aa]]
    new_v = [v, v[is_aa | is_ba], v[is_aa | is_ab], v[is_aa]]
    return _combine(
        np.concatenate(new_pair), np.concatenate(new_a), np.concatenate(new_b),
        np.concatenate(new_v), table.radius, order,
    )


def _sup_difference(first, second):
    keys = np.concatenate([
        np.stack([first.pair, first.za, first.zb], axis=1),
        np.stack([second.pair, second.za, second.zb], axis=1),
    ])
    values = np.concatenate([first.values, -second.values])
    if len(values) == 0:
        return 0.0
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    diff = np.zeros(inverse.max() + 1)
    np.add.at(diff, inverse.ravel(), values)
    return float(np.max(np.abs(diff)))


def solve_pair_correlations(seed_freq=None, radius=20.0, max_iter=None, tol=None):
    """
    Fixed point of the renormalisation equations.

    Args:
        seed_freq: nu_aa(0) in (0, 1); default the letter frequency tau - 1
        radius: support radius of the returned table (>= 3)
        max_iter: iteration cap
        tol: sup-norm convergence tolerance

    Returns:
        PairCorrelationTable
    """
    order = QuadraticOrder.golden()
    natural = order.theta - 1
    seed_freq = natural if seed_freq is None else seed_freq
    max_iter = max_iter or get_setting('RENORM_MAX_ITER')
    tol = tol or get_setting('RENORM_TOL')
    if not 0 < seed_freq < 1:
        raise ConfigurationError(f"nu_aa(0) must lie in (0, 1), got {seed_freq}")
    if tol <= 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}")
    if radius < 3:
        raise ConfigurationError(f"support radius must be at least 3, got {radius}")
    if abs(seed_freq - natural) > 1e-12:
        logger.warning("nu_aa(0) = %s differs from tau - 1; the fixed point is rescaled accordingly", seed_freq)

    table = PairCorrelationTable.seed(seed_freq, radius)
    for iteration in range(1, max_iter + 1):
        updated = renorm_step(table)
        change = _sup_difference(updated, table)
        table = updated
        if change < tol:
            logger.info("pair correlations converged after %d iterations (%d entries)", iteration, len(table))
            return table
    raise ConvergenceError(f"pair correlations did not converge within {max_iter} iterations (last change {change:.3g})")


def count_pair_correlations(patch, radius):
    """
    Pair correlation frequencies counted directly on an exact binary patch.

    Base points are those at least `radius` away from the patch boundary;
    frequencies are per base point.
    """
    if not patch.is_exact:
        raise ConfigurationError("pair counting needs exact patch coordinates")
    positions, types = patch.positions, patch.types.astype(np.int64)
    A, B = patch.coeff_a.astype(np.int64), patch.coeff_b.astype(np.int64)
    edge = patch.radius - radius
    base = np.abs(positions) <= edge
    count = int(np.count_nonzero(base))
    if count == 0:
        raise ConfigurationError(f"patch of radius {patch.radius} has no points {radius} away from its edge")

    # pair index 2*i + j matches PAIRS; at z = 0 it is 3*i
    pair = [types[base] * 3]
    za, zb = [np.zeros(count, dtype=np.int64)], [np.zeros(count, dtype=np.int64)]
    for direction in (1, -1):
        shift = 1
        while shift < len(positions):
            if direction > 0:
                first, second = slice(None, -shift), slice(shift, None)
            else:
                first, second = slice(shift, None), slice(None, -shift)
            distance = positions[second] - positions[first]
            keep = base[first] & (np.abs(distance) <= radius + 1e-9)
            if not np.any(np.abs(distance) <= radius + 1e-9):
                break
            pair.append(2 * types[first][keep] + types[second][keep])
            za.append((A[second] - A[first])[keep])
            zb.append((B[second] - B[first])[keep])
            shift += 1
    table = _combine(
        np.concatenate(pair), np.concatenate(za), np.concatenate(zb),
        np.ones(sum(len(p) for p in pair)), radius, patch.order,
    )
    return PairCorrelationTable(table.pair, table.za, table.zb, table.values / count, radius, patch.order)


def fourier_matrix(rule, k, lengths=None):
    """
    B(k)_ij = sum of exp(2 pi i k t) over the offsets t of letter i in the
    image of letter j (natural lengths unless given).
    """
    lengths = lengths or rule.natural_lengths
    matrix = np.zeros((rule.d, rule.d), dtype=complex)
    for j, image in enumerate(rule.images):
        offsets = np.array([float(t) for t in rule.image_offsets(j, lengths)])
        letters = rule.encode(image)
        np.add.at(matrix, (letters, j), np.exp(2j * np.pi * k * offsets))
    return matrix


def _cocycle_factors(rule, k, n):
    lam = rule.pf_eigenvalue
    for m in range(1, n + 1):
        yield fourier_matrix(rule, k * lam ** (-m))


def cocycle_exponent(rule, k, n, v=None):
    """
    Growth rate (1/n) log |B(k/lam^n) ... B(k/lam) v|.

    The vector is renormalised after each factor and the logs accumulated.
    """
    if k <= 0 or n < 1:
        raise ConfigurationError(f"need k > 0 and n >= 1, got k={k}, n={n}")
    v = np.ones(rule.d, dtype=complex) if v is None else np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ConfigurationError("start vector must be non-zero")
    v = v / norm
    total = 0.0
    for factor in _cocycle_factors(rule, k, n):
        v = factor @ v
        norm = np.linalg.norm(v)
        if norm == 0:
            return float('-inf')
        total += math.log(norm)
        v = v / norm
    return total / n


def cocycle_spectrum(rule, k, n, transient=10):
    """
    Full Lyapunov spectrum of the Fourier cocycle at k by repeated QR.

    The first `transient` factors only align the frame; the remaining n
    factors are averaged. Returns exponents largest first.
    """
    if k <= 0 or n < 1:
        raise ConfigurationError(f"need k > 0 and n >= 1, got k={k}, n={n}")
    Q = np.eye(rule.d, dtype=complex)
    sums = np.zeros(rule.d)
    for step, factor in enumerate(_cocycle_factors(rule, k, n + transient)):
        Q, R = np.linalg.qr(factor @ Q)
        if step >= transient:
            with np.errstate(divide='ignore'):
                sums += np.log(np.abs(np.diag(R)))
    return np.sort(sums / n)[::-1]


def amplitude_exponents(rule, k, n, transient=10):
    """Cocycle spectrum shifted by -log(lambda)."""
    return cocycle_spectrum(rule, k, n, transient) - math.log(rule.pf_eigenvalue)


@dataclass(frozen=True)
class ExponentMeasurement:
    rule: str
    depth: int
    k_values: tuple
    amplitude_exponents: tuple
    intensity_exponent: float
    z_exponent: float
    spread: float


def _block_size(rule):
    """Multiplicity of the largest subdominant modulus."""
    moduli = rule.spectral.moduli
    if len(moduli) < 2:
        return 0
    return sum(1 for m in moduli[1:] if abs(m - moduli[1]) <= 1e-9 * max(1.0, moduli[1]))


def measure_exponent(rule, n=50, k_values=None, count=10, seed=None):
    """
    Z-exponent from the cocycle: amplitudes along k/lam**l decay with the
    leading negative amplitude exponent, so Z(k) ~ k**(-2 gamma / log lam).

    Args:
        rule: SubstitutionRule
        n: cocycle depth
        k_values: wave numbers; default `count` uniform draws from (0.1, 1)
        seed: RNG seed for the draws

    Returns:
        ExponentMeasurement averaged over the k values
    """
    if k_values is None:
        rng = np.random.default_rng(get_setting('SEED') if seed is None else seed)
        k_values = rng.uniform(0.1, 1.0, size=count)
    k_values = tuple(float(k) for k in k_values)
    block = _block_size(rule)
    if block == 0:
        raise ConfigurationError(f"{rule.name}: no subdominant exponent to measure")
    log_lam = math.log(rule.pf_eigenvalue)
    relevant = []
    for k in k_values:
        shifted = amplitude_exponents(rule, k, n)
        relevant.append(float(np.mean(shifted[1:1 + block])))
    relevant = np.array(relevant)
    gamma = float(np.mean(relevant))
    logger.info("%s: amplitude exponent %.6f over %d wave numbers", rule.name, gamma, len(k_values))
    return ExponentMeasurement(
        rule=rule.name,
        depth=n,
        k_values=k_values,
        amplitude_exponents=tuple(float(x) for x in relevant),
        intensity_exponent=2 * gamma,
        z_exponent=-2 * gamma / log_lam,
        spread=float(np.ptp(relevant)),
    )


@dataclass(frozen=True)
class ExponentPrediction:
    rule: str
    alpha_tilde: float
    derivation: str
    candidates: tuple = ()
    flagged: bool = False
    note: str = ''

    @property
    def predicted_exponent(self):
        return 2 * self.alpha_tilde


def predict_exponent(rule):
    """
    Predicted small-k law Z(k) ~ k**(2 alpha_tilde).

    Binary rules use alpha_tilde = 2 - log|det M| / log lam. Larger
    alphabets use 1 - log|mu| / log lam for each subdominant modulus mu;
    the largest modulus is taken and the choice is flagged.
    """
    spectral = rule.spectral
    lam = spectral.pf_eigenvalue
    log_lam = math.log(lam)
    if rule.d == 2:
        det = abs(spectral.determinant)
        if det == 0:
            return ExponentPrediction(
                rule=rule.name, alpha_tilde=float('inf'), derivation='binary-det',
                flagged=True, note='det(M) = 0: decay faster than any power',
            )
        return ExponentPrediction(rule=rule.name, alpha_tilde=2 - math.log(det) / log_lam, derivation='binary-det')

    candidates = tuple(1 - math.log(mu) / log_lam for mu in spectral.subdominant_moduli)
    if not candidates:
        return ExponentPrediction(
            rule=rule.name, alpha_tilde=float('inf'), derivation='subleading-eigenvalue',
            flagged=True, note='no non-zero subdominant eigenvalue',
        )
    note = 'assumes the largest subdominant modulus dominates'
    if len(candidates) > 1:
        note += '; alternatives ' + ', '.join(f"{2 * c:.6g}" for c in candidates[1:])
    return ExponentPrediction(
        rule=rule.name,
        alpha_tilde=candidates[0],
        derivation='subleading-eigenvalue',
        candidates=candidates,
        flagged=True,
        note=note,
    )


def exponent_report(rule):
    """Plain-data exponent record for JSON output."""
    prediction = predict_exponent(rule)
    spectrum = lyapunov_spectrum(rule.matrix)
    return {
        'rule': rule.name,
        'lambda': rule.pf_eigenvalue,
        'det': rule.spectral.determinant,
        'lyapunov_spectrum': [x if math.isfinite(x) else None for x in spectrum],
        'alpha_tilde': prediction.alpha_tilde if math.isfinite(prediction.alpha_tilde) else None,
        'predicted_exponent': prediction.predicted_exponent if math.isfinite(prediction.alpha_tilde) else None,
        'derivation': prediction.derivation,
        'candidates': [2 * c for c in prediction.candidates],
        'flagged': prediction.flagged,
        'note': prediction.note,
    }
