"""
Cut-and-project schemes over quadratic orders: model sets, densities,
Bragg peak intensities, Fourier-module enumeration and the pure-point
Z(k) summation.
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .algebra import AlgebraicNumber, QuadraticOrder, exact_sign_array
from .conf import get_setting
from .exceptions import ConfigurationError
from .substitution import TypedPatch

logger = logging.getLogger(__name__)

MAX_SERIES_DEPTH = 150


def _as_exact(value):
    """Window endpoints and cut-offs become AlgebraicNumbers or Fractions."""
    if isinstance(value, (AlgebraicNumber, Fraction)):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise ConfigurationError(f"unsupported exact value {value!r}")


def _offset_sign(A, B, order, value):
    """Exact sign of (A + B*theta) - value, vectorised over coefficient arrays."""
    t, disc = order.trace, order.discriminant
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if isinstance(value, AlgebraicNumber):
        a, b = A - value.a, B - value.b
        return exact_sign_array(2 * a + b * t, b, disc)
    value = _as_exact(value)
    p, q = value.numerator, value.denominator
    return exact_sign_array(2 * (q * A - p) + q * B * t, q * B, disc)


def _offset_sign_sqrt(A, B, order, c):
    """Exact sign of (A + B*theta) - c*sqrt(disc) for rational c."""
    t, disc = order.trace, order.discriminant
    c = _as_exact(c)
    p, q = c.numerator, c.denominator
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    # sqrt(disc) = 2*theta - trace
    v = q * B - 2 * p
    return exact_sign_array(2 * (q * A + p * t) + v * t, v, disc)


@dataclass(frozen=True)
class CutProjectScheme:
    """Minkowski embedding {(x, x*)} of a quadratic order."""
    order: QuadraticOrder

    @classmethod
    def golden(cls):
        return cls(QuadraticOrder.golden())

    @classmethod
    def noble(cls, p):
        return cls(QuadraticOrder.noble(p))

    @property
    def covolume(self):
        return self.order.sqrt_discriminant

    @property
    def theta(self):
        return self.order.theta


@dataclass(frozen=True)
class Window:
    """Interval in internal space with closure flags."""
    left: object
    right: object
    left_closed: bool = False
    right_closed: bool = True

    def __post_init__(self):
        left, right = _as_exact(self.left), _as_exact(self.right)
        if self._difference_sign(left, right) > 0:
            raise ConfigurationError(f"window endpoints out of order: {left} > {right}")
        object.__setattr__(self, 'left', left)
        object.__setattr__(self, 'right', right)

    @staticmethod
    def _difference_sign(x, y):
        if isinstance(x, AlgebraicNumber):
            return x.compare(y)
        if isinstance(y, AlgebraicNumber):
            return -y.compare(x)
        return (x > y) - (x < y)

    @classmethod
    def fibonacci(cls):
        """(-1, tau - 1]."""
        order = QuadraticOrder.golden()
        return cls(order.element(-1), order.element(-1, 1))

    @classmethod
    def noble(cls, p):
        """(-1, lambda_p - p], of length 1/lambda_p + 1."""
        order = QuadraticOrder.noble(p)
        return cls(order.element(-1), order.element(-p, 1))

    @property
    def exact_length(self):
        return self.right - self.left

    @property
    def length(self):
        return float(self.exact_length)

    @property
    def is_empty(self):
        return self._difference_sign(self.left, self.right) == 0

    def contains_star(self, A, B, order):
        """
        Exact test x* in W for x = A + B*theta, vectorised.

        x* is represented by its conjugate element, whose primary embedding
        is the internal-space coordinate.
        """
        A = np.asarray(A, dtype=object)
        B = np.asarray(B, dtype=object)
        if self.is_empty:
            return np.zeros(A.shape, dtype=bool)
        star_a, star_b = A + B * order.trace, -B
        above = _offset_sign(star_a, star_b, order, self.left)
        below = _offset_sign(star_a, star_b, order, self.right)
        ok_left = above >= 0 if self.left_closed else above > 0
        ok_right = below <= 0 if self.right_closed else below < 0
        return np.asarray(ok_left & ok_right, dtype=bool)

    def contains(self, x):
        return bool(self.contains_star([x.a], [x.b], x.order)[0])


def model_set_density(scheme, W):
    return W.length / scheme.covolume


def generate_model_set(scheme, W, R):
    """
    All x = a + b*theta with |x| <= R and x* in W.

    Args:
        scheme: CutProjectScheme
        W: Window
        R: half-width, R > 0

    Returns:
        TypedPatch with exact coefficients; types ranked by the gap to the
        right neighbour (longest gap is type 'a')
    """
    if R <= 0:
        raise ConfigurationError(f"radius must be positive, got {R}")
    order = scheme.order
    theta, theta_star, root = order.theta, order.theta_star, scheme.covolume
    if W.is_empty:
        empty = np.zeros(0)
        return TypedPatch(empty, empty.astype(np.int8), (), float(R), ('a',), order,
                          empty.astype(np.int64), empty.astype(np.int64))

    w_lo, w_hi = float(W.left), float(W.right)
    b_values = np.arange(math.floor((-R - w_hi) / root) - 1, math.ceil((R - w_lo) / root) + 2)
    lo = np.maximum(-R - b_values * theta, w_lo - b_values * theta_star)
    hi = np.minimum(R - b_values * theta, w_hi - b_values * theta_star)
    a_start = np.ceil(lo).astype(np.int64) - 1
    counts = np.maximum(np.floor(hi).astype(np.int64) + 1 - a_start + 1, 0)
    B = np.repeat(b_values, counts)
    A = np.repeat(a_start, counts) + (np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts))

    radius = _as_exact(R)
    keep = W.contains_star(A, B, order)
    keep &= (_offset_sign(A, B, order, radius) <= 0) & (_offset_sign(A, B, order, -radius) >= 0)
    A, B = A[keep].astype(np.int64), B[keep].astype(np.int64)
    positions = A + B * theta
    sort = np.argsort(positions, kind='stable')
    A, B, positions = A[sort], B[sort], positions[sort]

    types, lengths = _classify_by_gap(A, B, W, order)
    logger.debug("model set: %d points in [-%s, %s]", len(A), R, R)
    return TypedPatch(
        positions=positions,
        types=types,
        lengths=lengths,
        radius=float(R),
        alphabet=tuple('abcdefgh'[:max(len(lengths), 1)]),
        order=order,
        coeff_a=A,
        coeff_b=B,
    )


def _classify_by_gap(A, B, W, order):
    if len(A) < 2:
        return np.zeros(len(A), dtype=np.int8), ()
    gaps = {(int(a), int(b)) for a, b in zip(np.diff(A), np.diff(B))}
    gaps = sorted((order.element(a, b) for a, b in gaps))
    types = np.full(len(A), -1, dtype=np.int8)
    # smallest admissible gap is the distance to the right neighbour
    for rank, gap in enumerate(gaps):
        free = types < 0
        hit = W.contains_star(A[free] + gap.a, B[free] + gap.b, order)
        index = np.flatnonzero(free)[hit]
        types[index] = len(gaps) - 1 - rank
    types[types < 0] = 0
    return types, tuple(float(g) for g in reversed(gaps))


@dataclass(frozen=True)
class ModulePoint:
    """Fourier-module element kappa = (m + n*theta)/sqrt(disc)."""
    m: int
    n: int
    order: QuadraticOrder

    @property
    def numerator(self):
        return AlgebraicNumber(self.m, self.n, self.order)

    @property
    def is_zero(self):
        return self.m == 0 and self.n == 0

    def _precision(self):
        # scaled points cancel about as many digits as their coefficients carry
        digits = len(str(max(abs(self.m), abs(self.n))))
        return get_setting('MP_DPS') + 2 * digits

    def _mp_value(self):
        theta = self.order.theta_mp()
        return (self.m + self.n * theta) / mpmath.sqrt(self.order.discriminant)

    @property
    def value(self):
        with mpmath.workdps(self._precision()):
            return float(self._mp_value())

    @property
    def star_value(self):
        """kappa* = n - kappa."""
        with mpmath.workdps(self._precision()):
            return float(self.n - self._mp_value())

    def scaled(self, times=1):
        """kappa / theta**times, exact."""
        x = self.numerator.divide_by_theta(times)
        return ModulePoint(x.a, x.b, self.order)

    def inflated(self, times=1):
        x = self.numerator.times_theta(times)
        return ModulePoint(x.a, x.b, self.order)

    def compare_value(self, k):
        """Exact comparison of kappa with a rational k."""
        return int(_offset_sign_sqrt([self.m], [self.n], self.order, k)[0])

    def __str__(self):
        return f"({self.m} + {self.n} theta)/sqrt({self.order.discriminant})"


@dataclass(frozen=True)
class PeakEntry:
    point: ModulePoint
    k: float
    kstar: float
    intensity: float


@dataclass
class PeakSet:
    """Peaks with k > 0; the pattern is symmetric under k -> -k."""
    scheme: CutProjectScheme
    window_length: object
    entries: list = field(default_factory=list)

    @property
    def normalisation(self):
        if self.window_length is None:
            return None
        return (float(self.window_length) / self.scheme.covolume) ** 2

    def __len__(self):
        return len(self.entries)

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['m', 'n', 'k', 'kstar', 'intensity'])
        for entry in self.entries:
            writer.writerow([
                entry.point.m, entry.point.n, f"{entry.k:.17g}",
                f"{entry.kstar:.17g}", f"{entry.intensity:.17g}",
            ])


def _window_length(s):
    if isinstance(s, AlgebraicNumber):
        return s
    s = _as_exact(s)
    if s <= 0:
        raise ConfigurationError(f"window length must be positive, got {s}")
    return s


def peak_intensity(scheme, s, k):
    """
    Bragg intensity dens**2 * sinc(pi*s*k*)**2 of a module point.

    The sine argument is reduced exactly before evaluation: for s in the
    order, sin(pi*s*k*)**2 = sin(pi*y)**2 with y = s* k small when k is
    small; for rational s the integer part of s*n is removed.

    Args:
        scheme: CutProjectScheme
        s: window length (AlgebraicNumber of the scheme's order, or rational)
        k: ModulePoint

    Returns:
        Intensity as a float
    """
    s = _window_length(s)
    s_float = float(s)
    density = s_float / scheme.covolume
    if k.is_zero:
        return density ** 2
    kstar = k.star_value
    if isinstance(s, AlgebraicNumber):
        y = s.star() * k.numerator
        if y.b % 2 == 0 and y.a == -scheme.order.trace * y.b // 2:
            # s*k* is an integer
            return 0.0
        reduced = ModulePoint(y.a, y.b, scheme.order).value
    else:
        offset = (s * k.n) % 1
        reduced = float(offset) - s_float * k.value
    denominator = math.pi * s_float * kstar
    return density ** 2 * (math.sin(math.pi * reduced) / denominator) ** 2


def decay_constant(scheme, s, k):
    """
    Limit of I(k/theta**l) * theta**(4l) for s in the order.

    Equals dens**2 * (s* k / (s k*))**2, the Taylor limit of the reduced
    sine over the growing denominator.
    """
    s = _window_length(s)
    if not isinstance(s, AlgebraicNumber):
        raise ConfigurationError("the theta**(-4l) decay needs a window length in the order")
    density = float(s) / scheme.covolume
    return density ** 2 * (s.star_value() * k.value / (float(s) * k.star_value)) ** 2


def enumerate_fourier_module(scheme, k_max, kstar_max, s=None):
    """
    All kappa = (m + n*theta)/sqrt(disc) with 0 < kappa <= k_max and
    |kappa*| <= kstar_max.

    Args:
        scheme: CutProjectScheme
        k_max, kstar_max: positive bounds
        s: optional window length; when given, intensities are filled in

    Returns:
        PeakSet sorted by k
    """
    order = scheme.order
    peaks = PeakSet(scheme, s)
    if k_max <= 0 or kstar_max <= 0:
        return peaks
    theta, root = order.theta, scheme.covolume
    n_values = np.arange(math.ceil(-kstar_max) - 1, math.floor(k_max + kstar_max) + 2)
    kappa_lo = np.maximum(0.0, n_values - kstar_max)
    kappa_hi = np.minimum(k_max, n_values + kstar_max)
    m_lo = np.ceil(kappa_lo * root - n_values * theta).astype(np.int64) - 1
    m_hi = np.floor(kappa_hi * root - n_values * theta).astype(np.int64) + 1
    counts = np.maximum(m_hi - m_lo + 1, 0)
    N = np.repeat(n_values, counts)
    M = np.repeat(m_lo, counts) + (np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts))

    # kappa > 0, kappa <= k_max
    keep = _offset_sign(M, N, order, 0) > 0
    keep &= _offset_sign_sqrt(M, N, order, k_max) <= 0
    # |kappa*| <= kstar_max with kappa* = -(m + n*theta*)/sqrt(disc)
    star_a, star_b = M + N * order.trace, -N
    keep &= _offset_sign_sqrt(star_a, star_b, order, kstar_max) <= 0
    keep &= _offset_sign_sqrt(-star_a, -star_b, order, kstar_max) <= 0

    points = [ModulePoint(int(m), int(n), order) for m, n in zip(M[keep], N[keep])]
    for point in points:
        intensity = peak_intensity(scheme, s, point) if s is not None else float('nan')
        peaks.entries.append(PeakEntry(point, point.value, point.star_value, intensity))
    peaks.entries.sort(key=lambda entry: entry.k)
    return peaks


@dataclass(frozen=True)
class SeriesSum:
    value: float
    tail_bound: float
    terms: int


def _is_in_order(s):
    return isinstance(s, AlgebraicNumber)


def sigma_series(scheme, s, k, depth=None, rtol=1e-17):
    """
    Sum of I(k/theta**l) over l >= 0.

    Args:
        scheme: CutProjectScheme (theta must be a unit)
        s: window length
        k: ModulePoint, non-zero
        depth: number of terms; default runs until terms drop below rtol
            times the running sum

    Returns:
        SeriesSum with a rigorous geometric bound on the omitted terms
    """
    if k.is_zero:
        raise ConfigurationError("the inflation series is defined for non-zero module points")
    if depth is not None and depth < 1:
        raise ConfigurationError(f"depth must be >= 1, got {depth}")
    s = _window_length(s)
    theta = scheme.theta
    limit = depth or MAX_SERIES_DEPTH
    terms = []
    point = k
    for level in range(limit):
        terms.append(peak_intensity(scheme, s, point))
        if depth is None and level >= 4 and terms[-1] <= rtol * math.fsum(terms):
            break
        point = point.scaled()
    count = len(terms)
    value = math.fsum(terms)

    density = float(s) / scheme.covolume
    base = (density / (math.pi * float(s) * k.star_value)) ** 2
    tail = base * theta ** (-2 * count) / (1 - theta ** -2)
    if _is_in_order(s):
        ratio = (s.star_value() * k.value / (float(s) * k.star_value)) ** 2
        tail = min(tail, density ** 2 * ratio * theta ** (-4 * count) / (1 - theta ** -4))
    return SeriesSum(value=value, tail_bound=tail, terms=count)


def default_kstar_cut(s):
    return get_setting('KSTAR_CUT_NUMERATOR') / float(s)


def z_pure_point(scheme, s, k, kstar_cut=None):
    """
    Pure-point Z(k): total intensity of the peaks in (0, k].

    Peaks are grouped into inflation orbits with representatives in
    (k/theta, k]; only orbits with kappa*|kappa*| <= kstar_cut enter, a
    region invariant under kappa -> kappa/theta.

    Args:
        scheme: CutProjectScheme with a unit theta
        s: window length
        k: upper limit, k > 0
        kstar_cut: cut on kappa*|kappa*| (default 50/s)

    Returns:
        (value, tail_bound)
    """
    if k <= 0:
        raise ConfigurationError(f"Z(k) needs k > 0, got {k}")
    s = _window_length(s)
    kstar_cut = kstar_cut or default_kstar_cut(s)
    if kstar_cut <= 0:
        raise ConfigurationError(f"kstar_cut must be positive, got {kstar_cut}")
    order = scheme.order
    theta = scheme.theta
    k_exact = _as_exact(k)

    # enumerate at a scale where k*theta**j lies in (1/theta, 1]
    j = max(0, math.ceil(-math.log(k) / math.log(theta)))
    scaled_k = k * theta ** j
    margin = 1 + 1e-9
    candidates = enumerate_fourier_module(scheme, scaled_k * margin, kstar_cut * theta / scaled_k * margin)

    values, tails = [], []
    representatives = 0
    for entry in candidates.entries:
        point = entry.point.scaled(j)
        if point.compare_value(k_exact) > 0 or point.inflated().compare_value(k_exact) <= 0:
            continue
        if point.value * abs(point.star_value) > kstar_cut:
            continue
        series = sigma_series(scheme, s, point)
        values.append(series.value)
        tails.append(series.tail_bound)
        representatives += 1

    density = float(s) / scheme.covolume
    if _is_in_order(s):
        ratio = (s.star_value() / float(s)) ** 2
        tails.append(density ** 2 * ratio * scheme.covolume * k ** 4 / (2 * kstar_cut))
    else:
        tails.append(density ** 2 * scheme.covolume * k ** 2 / (math.pi ** 2 * float(s) ** 2 * kstar_cut))
    logger.debug("Z(%g): %d orbit representatives", k, representatives)
    return math.fsum(values), math.fsum(tails)
