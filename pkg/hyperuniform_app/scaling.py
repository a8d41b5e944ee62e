"""
Geometric scans of Z(k) towards k = 0 and the scaling-law fits run on them.

Everything is carried in log space so that faster-than-power decays (values
far below the float range) can be fitted.
"""
import csv
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .exceptions import ConfigurationError, HyperuniformError, ScanError

logger = logging.getLogger(__name__)

ONE_DECADE = math.log(10)
DEFAULT_DROP = 2


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Samples (k_l, Z_l) with k_l = k0 * ratio**-l, l = 0..depth-1."""
    producer: str
    ratio: float
    k0: float
    depth: int
    log_k: np.ndarray
    log_z: np.ndarray

    @property
    def k(self):
        return np.exp(self.log_k)

    @property
    def Z(self):
        return np.exp(self.log_z)

    def __len__(self):
        return len(self.log_k)

    def drop(self, count):
        """The scan without its first `count` samples."""
        return replace(self, log_k=self.log_k[count:], log_z=self.log_z[count:])

    def is_monotone(self):
        finite = self.log_z[np.isfinite(self.log_z)]
        return bool(np.all(np.diff(finite) <= 1e-12 * np.maximum(1.0, np.abs(finite[:-1]))))

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['level', 'k', 'Z', 'log_k', 'log_Z'])
        for level, (log_k, log_z) in enumerate(zip(self.log_k, self.log_z)):
            writer.writerow([
                level, f"{math.exp(log_k):.17g}", f"{math.exp(log_z):.17g}",
                f"{log_k:.17g}", f"{log_z:.17g}",
            ])


def read_scan_csv(handle, producer='input'):
    """
    Scan from CSV with a `k` or `log_k` column and a `Z` or `log_Z` column.

    Raises:
        ConfigurationError naming the offending line
    """
    reader = csv.DictReader(handle)
    columns = set(reader.fieldnames or ())
    if not ({'k', 'log_k'} & columns) or not ({'Z', 'log_Z'} & columns):
        raise ConfigurationError("line 1: header needs k or log_k and Z or log_Z columns")
    log_k, log_z = [], []
    for row in reader:
        try:
            x = float(row['log_k']) if row.get('log_k') not in (None, '') else math.log(float(row['k']))
            y = float(row['log_Z']) if row.get('log_Z') not in (None, '') else math.log(float(row['Z']))
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"line {reader.line_num}: {exc}") from exc
        log_k.append(x)
        log_z.append(y)
    if not log_k:
        raise ConfigurationError("line 2: no samples")
    log_k, log_z = np.array(log_k), np.array(log_z)
    ratio = math.exp(log_k[0] - log_k[1]) if len(log_k) > 1 else float('nan')
    return ScanResult(producer, ratio, math.exp(log_k[0]), len(log_k), log_k, log_z)


def _log_value(producer, k):
    log_z = getattr(producer, 'log_z', None)
    if log_z is not None:
        return float(log_z(k))
    value = producer(k)
    if isinstance(value, tuple):
        value = value[0]
    if isinstance(value, Fraction):
        return math.log(value) if value > 0 else float('-inf')
    value = float(value)
    return math.log(value) if value > 0 else float('-inf')


def scan(producer, k0, ratio, depth, name=None):
    """
    Evaluate a producer along k0 / ratio**l.

    Args:
        producer: callable k -> Z (a (value, tail) tuple is accepted), or an
            object with a `log_z(k)` method for log-space producers
        k0: anchor, k0 > 0
        ratio: base ratio > 1
        depth: number of samples, >= 3

    Raises:
        ScanError carrying the partial scan and every failing k
    """
    if not ratio > 1:
        raise ConfigurationError(f"ratio must exceed 1, got {ratio}")
    if depth < 3:
        raise ConfigurationError(f"depth must be >= 3, got {depth}")
    if not k0 > 0:
        raise ConfigurationError(f"k0 must be positive, got {k0}")
    name = name or getattr(producer, 'name', None) or getattr(producer, '__name__', 'producer')
    log_k = math.log(k0) - np.arange(depth) * math.log(ratio)
    log_z = np.full(depth, np.nan)
    failures = []
    for level, x in enumerate(log_k):
        k = k0 / ratio ** level
        try:
            log_z[level] = _log_value(producer, k)
        except HyperuniformError as exc:
            logger.warning("%s: Z(%.6g) failed: %s", name, k, exc)
            failures.append((k, str(exc)))
        else:
            logger.debug("%s: log Z(%.6g) = %.6f", name, k, log_z[level])
    result = ScanResult(name, float(ratio), float(k0), depth, log_k, log_z)
    if failures:
        raise ScanError(
            f"{name}: {len(failures)} of {depth} evaluations failed, first at k = {failures[0][0]:.6g}",
            failures, result,
        )
    if not result.is_monotone():
        logger.warning("%s: Z is not non-increasing along the scan", name)
    logger.info("%s: scanned %d points from k = %g with ratio %g", name, depth, k0, ratio)
    return result


@dataclass(frozen=True)
class PowerFit:
    producer: str
    exponent: float
    log_prefactor: float
    max_residual: float
    spread: float
    samples: int
    predicted: float = None
    tol: float = None
    passed: bool = None
    label: str = 'two-sided'

    @property
    def within_decade(self):
        return self.spread < ONE_DECADE


def _positive_samples(scan_result, minimum):
    if len(scan_result) < minimum:
        raise ConfigurationError(f"{scan_result.producer}: need >= {minimum} samples, got {len(scan_result)}")
    if not np.all(np.isfinite(scan_result.log_z)):
        raise ConfigurationError(f"{scan_result.producer}: non-positive samples cannot be fitted in log space")
    return scan_result.log_k, scan_result.log_z


def _judge(exponent, predicted, tol, label):
    if predicted is None:
        return None
    if label == 'upper-bound-only':
        return bool(exponent >= predicted - tol)
    return bool(abs(exponent - predicted) <= tol)


def fit_power(scan_result, predicted=None, tol=0.1, drop=DEFAULT_DROP, label='two-sided'):
    """
    Least-squares slope of log Z against log k.

    The first `drop` samples sit outside the asymptotic regime and are left
    out. The spread of log(Z k**-e), e the predicted exponent when given,
    measures the two-sided boundedness; one decade is the pass threshold.

    Args:
        label: 'two-sided' passes iff |slope - predicted| <= tol;
            'upper-bound-only' passes iff slope >= predicted - tol
    """
    data = scan_result.drop(drop) if drop else scan_result
    x, y = _positive_samples(data, 4)
    x_mean = math.fsum(x) / len(x)
    y_mean = math.fsum(y) / len(y)
    dx, dy = x - x_mean, y - y_mean
    slope = math.fsum(dx * dy) / math.fsum(dx * dx)
    intercept = y_mean - slope * x_mean
    residual = y - (slope * x + intercept)
    exponent = slope if predicted is None else predicted
    normalised = y - exponent * x
    fit = PowerFit(
        producer=data.producer,
        exponent=slope,
        log_prefactor=intercept,
        max_residual=float(np.max(np.abs(residual))),
        spread=float(np.ptp(normalised)),
        samples=len(x),
        predicted=predicted,
        tol=tol if predicted is not None else None,
        passed=_judge(slope, predicted, tol, label),
        label=label,
    )
    logger.info("%s: exponent %.6f (predicted %s)", fit.producer, slope, predicted)
    return fit


def fit_measurement(measurement, predicted, tol=0.1):
    """PowerFit row for a cocycle measurement of the Z exponent."""
    return PowerFit(
        producer=measurement.rule,
        exponent=measurement.z_exponent,
        log_prefactor=float('nan'),
        max_residual=float('nan'),
        spread=measurement.spread,
        samples=len(measurement.k_values),
        predicted=predicted,
        tol=tol,
        passed=_judge(measurement.z_exponent, predicted, tol, 'two-sided'),
        label='cocycle',
    )


@dataclass(frozen=True)
class LogQuadraticFit:
    """log Z = A (log k)**2 + B log k + C."""
    producer: str
    A: float
    B: float
    C: float
    residual: float
    samples: int
    predicted: float = None
    tol: float = None
    passed: bool = None


def fit_log_quadratic(scan_result, predicted=None, tol=0.05, drop=0):
    data = scan_result.drop(drop) if drop else scan_result
    x, y = _positive_samples(data, 5)
    design = np.column_stack([x * x, x, np.ones_like(x)])
    if np.linalg.matrix_rank(design) < 3:
        raise ConfigurationError(f"{data.producer}: degenerate design matrix for the log-quadratic fit")
    (A, B, C), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([A, B, C]) - y)))
    passed = None if predicted is None else bool(abs(A - predicted) <= tol)
    logger.info("%s: log-quadratic A = %.6f, B = %.6f", data.producer, A, B)
    return LogQuadraticFit(data.producer, float(A), float(B), float(C), residual, len(x),
                           predicted, tol if predicted is not None else None, passed)


REPORT_COLUMNS = (
    'system', 'model', 'measured', 'predicted', 'tol', 'passed',
    'label', 'spread', 'max_residual', 'samples',
)


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def _row(fit):
    if isinstance(fit, LogQuadraticFit):
        return {
            'system': fit.producer, 'model': 'log-quadratic', 'measured': fit.A,
            'predicted': _finite_or_none(fit.predicted), 'tol': fit.tol, 'passed': fit.passed,
            'label': 'two-sided', 'spread': None, 'max_residual': fit.residual, 'samples': fit.samples,
        }
    return {
        'system': fit.producer, 'model': 'power', 'measured': fit.exponent,
        'predicted': _finite_or_none(fit.predicted), 'tol': fit.tol, 'passed': fit.passed,
        'label': fit.label, 'spread': _finite_or_none(fit.spread),
        'max_residual': _finite_or_none(fit.max_residual), 'samples': fit.samples,
    }


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple

    @property
    def all_passed(self):
        return all(row['passed'] is not False for row in self.rows)

    def as_table(self):
        lines = [f"{'system':<24} {'model':<14} {'measured':>10} {'predicted':>10} {'tol':>7}  result"]
        for row in self.rows:
            predicted = '-' if row['predicted'] is None else f"{row['predicted']:10.4f}"
            tol = '-' if row['tol'] is None else f"{row['tol']:7.3f}"
            result = {True: 'pass', False: 'FAIL', None: '-'}[row['passed']]
            lines.append(
                f"{row['system']:<24} {row['model']:<14} {row['measured']:10.4f} "
                f"{predicted:>10} {tol:>7}  {result} ({row['label']})"
            )
        return '\n'.join(lines)

    def write_csv(self, handle):
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow([
                '' if row[name] is None else (f"{row[name]:.17g}" if isinstance(row[name], float) else row[name])
                for name in REPORT_COLUMNS
            ])


def report(*fits):
    """Collect fits into one comparison of measured against predicted exponents."""
    if not fits:
        raise ConfigurationError("a scaling report needs at least one fit")
    return ScalingReport(tuple(_row(fit) for fit in fits))
