"""
Registry of the standard Z(k) producers, each with its predicted exponent
and tolerance, for catalogue fits.
"""
import logging
import math
from dataclasses import dataclass, field

from . import cutproject, numbertheory, renorm, riesz, scaling, stochastic
from .algebra import QuadraticOrder
from .exceptions import ConfigurationError
from .substitution import catalogue

logger = logging.getLogger(__name__)

GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class Producer:
    """
    One catalogued system.

    kind is 'scan' (sample Z along k0/ratio**l and fit) or 'cocycle'
    (measure the exponent from the Fourier-matrix cocycle).
    """
    name: str
    kind: str
    predicted: float
    tol: float
    model: str = 'power'
    label: str = 'two-sided'
    k0: float = None
    ratio: float = None
    depth: int = None
    drop: int = scaling.DEFAULT_DROP
    evaluate: object = field(default=None, repr=False, compare=False)
    log_space: bool = False
    rule: str = None

    def log_z(self, k):
        if self.log_space:
            return self.evaluate(k)
        value = self.evaluate(k)
        if isinstance(value, tuple):
            value = value[0]
        value = float(value)
        return math.log(value) if value > 0 else float('-inf')


def pure_point(order, window):
    scheme = cutproject.CutProjectScheme(order)
    s = window.exact_length

    def evaluate(k):
        return cutproject.z_pure_point(scheme, s, k)
    return evaluate


def generic_window(s):
    scheme = cutproject.CutProjectScheme.golden()

    def evaluate(k):
        return cutproject.z_pure_point(scheme, s, k)
    return evaluate


def riesz_scaled(p, q):
    """log F at k = (p+q)**-n; k must sit on that grid."""
    b = p + q

    def evaluate(k):
        n = -math.log(k) / math.log(b)
        if abs(n - round(n)) > 1e-9:
            raise ConfigurationError(f"k = {k:g} is not a power of 1/{b}")
        return riesz.F_scaled(p, q, int(round(n)))[0]
    return evaluate


def squarefree(S):
    def evaluate(k):
        return numbertheory.z_squarefree(k, S)
    return evaluate


def analytic(model):
    def evaluate(k):
        return stochastic.z_analytic(model, k)
    return evaluate


def _gtm(p, q, n0=2, depth=8):
    b = p + q
    return Producer(
        f'gtm({p},{q})', 'scan', riesz.gtm_exponent(p, q), 0.05 * riesz.gtm_exponent(p, q),
        k0=float(b) ** -n0, ratio=float(b), depth=depth, drop=1,
        evaluate=riesz_scaled(p, q), log_space=True,
    )


def _cocycle(key):
    prediction = renorm.predict_exponent(catalogue(key))
    return Producer(prediction.rule, 'cocycle', prediction.predicted_exponent, 0.1, rule=key)


def _build():
    golden = QuadraticOrder.golden()
    noble_2, noble_3 = QuadraticOrder.noble(2), QuadraticOrder.noble(3)
    return (
        Producer('fibonacci', 'scan', 4.0, 0.1, k0=0.4, ratio=GOLDEN, depth=10,
                 evaluate=pure_point(golden, cutproject.Window.fibonacci())),
        Producer('fibonacci-generic', 'scan', 2.0, 0.1, label='upper-bound-only', k0=0.4, ratio=GOLDEN,
                 depth=10, evaluate=generic_window(1.5)),
        Producer('noble(2)', 'scan', 4.0, 0.15, k0=0.4, ratio=noble_2.theta, depth=8,
                 evaluate=pure_point(noble_2, cutproject.Window.noble(2))),
        Producer('noble(3)', 'scan', 4.0, 0.15, k0=0.4, ratio=noble_3.theta, depth=7,
                 evaluate=pure_point(noble_3, cutproject.Window.noble(3))),
        _cocycle('period-doubling'),
        _cocycle('limit-quasiperiodic'),
        _cocycle('kolakoski'),
        _cocycle('plastic'),
        Producer('thue-morse', 'scan', -1 / math.log(2), 0.05, model='log-quadratic',
                 k0=2.0 ** -4, ratio=2.0, depth=11, drop=0, evaluate=riesz_scaled(1, 1), log_space=True),
        _gtm(2, 1),
        _gtm(3, 1),
        _gtm(4, 1),
        _gtm(5, 1, depth=6),
        _gtm(3, 2, depth=6),
        Producer('squarefree', 'scan', 1.5, 0.05, label='upper-bound-only', k0=0.1, ratio=10 ** (1 / 3),
                 depth=10, evaluate=squarefree(2 ** 13)),
        Producer('poisson', 'scan', 1.0, 0.01, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.poisson())),
        Producer('bernoulli', 'scan', 1.0, 0.01, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.bernoulli(0.5))),
        Producer('markov', 'scan', 1.0, 0.05, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.markov(0.25, 0.25))),
        Producer('rmt(1)', 'scan', 2.0, 0.1, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.rmt(1))),
        Producer('rmt(2)', 'scan', 2.0, 0.1, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.rmt(2))),
        Producer('rmt(4)', 'scan', 2.0, 0.1, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.rmt(4))),
        Producer('random-tiling', 'scan', 1.0, 0.05, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.random_tiling(1.0, GOLDEN, 0.5))),
        Producer('rudin-shapiro', 'scan', 1.0, 0.01, k0=0.1, ratio=2.0, depth=8,
                 evaluate=analytic(stochastic.AnalyticModel.rudin_shapiro(0.5))),
    )


_REGISTRY = None


def registry():
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = {producer.name: producer for producer in _build()}
    return _REGISTRY


def get_producer(name):
    try:
        return registry()[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown producer {name!r}; known: {', '.join(registry())}"
        ) from None


def fit_producer(producer, depth=None, seed=None):
    """Scan and fit (or measure) one producer against its prediction."""
    if producer.kind == 'cocycle':
        measurement = renorm.measure_exponent(catalogue(producer.rule), n=depth or 50, seed=seed)
        return scaling.fit_measurement(measurement, producer.predicted, producer.tol)
    result = scaling.scan(producer, producer.k0, producer.ratio, depth or producer.depth, name=producer.name)
    if producer.model == 'log-quadratic':
        return scaling.fit_log_quadratic(result, producer.predicted, producer.tol, drop=producer.drop)
    return scaling.fit_power(result, producer.predicted, producer.tol, drop=producer.drop, label=producer.label)


def fit_catalogue(names=None, seed=None):
    """ScalingReport over the named producers (all when names is None)."""
    names = list(registry()) if names is None else list(names)
    if not names:
        raise ConfigurationError("empty catalogue selection")
    fits = [fit_producer(get_producer(name), seed=seed) for name in names]
    return scaling.report(*fits)
