"""
Map validated RunConfig options onto library calls.
"""
import logging
from functools import partial

import numpy as np

from . import cutproject, numbertheory, producers, stochastic
from .exceptions import ConfigurationError
from .forms import NAMED_RATIOS
from .substitution import catalogue, patch_of_radius

logger = logging.getLogger(__name__)


def system_label(options):
    system = options.get('system') or ''
    if system in ('noble',) and options.get('p') is not None:
        return f"{system}({int(options['p'])})"
    if system == 'gtm' and options.get('p') is not None:
        return f"gtm({int(options['p'])},{int(options['q'])})"
    if system == 'rmt' and options.get('beta') is not None:
        return f"rmt({options['beta']})"
    return system


def stochastic_model(options):
    system = options['system']
    if system == 'poisson':
        return stochastic.AnalyticModel.poisson()
    if system == 'lattice':
        return stochastic.AnalyticModel.lattice()
    if system == 'bernoulli':
        return stochastic.AnalyticModel.bernoulli(options['p'], options.get('weighting') or '01')
    if system == 'markov':
        return stochastic.AnalyticModel.markov(options['p'], options['q'])
    if system == 'random-tiling':
        return stochastic.AnalyticModel.random_tiling(options['u'], options['v'], options['p'])
    if system == 'bernoullised-rs':
        return stochastic.AnalyticModel.rudin_shapiro(options.get('p') or 0.0)
    if system == 'rmt':
        return stochastic.AnalyticModel.rmt(options['beta'])
    raise ConfigurationError(f"{system} is not a stochastic system")


def _scheme_and_window(options):
    if options['system'] == 'fibonacci':
        return cutproject.CutProjectScheme.golden(), cutproject.Window.fibonacci()
    p = int(options['p'])
    return cutproject.CutProjectScheme.noble(p), cutproject.Window.noble(p)


def generate(options):
    """Patch or realisation for `generate`; both expose write_csv."""
    system, R = options['system'], options['radius']
    if system in ('fibonacci', 'noble'):
        scheme, window = _scheme_and_window(options)
        return cutproject.generate_model_set(scheme, window, R)
    if system in ('poisson', 'lattice', 'bernoulli', 'markov', 'random-tiling', 'bernoullised-rs'):
        return stochastic.sample(stochastic_model(options), R, options.get('seed'))
    p = int(options['p']) if options.get('p') is not None else None
    q = int(options['q']) if options.get('q') is not None else None
    return patch_of_radius(catalogue(system, p, q), R)


def _ratio(options, default):
    ratio = options.get('ratio') or 'auto'
    if ratio == 'auto':
        return default
    if ratio in NAMED_RATIOS:
        return NAMED_RATIOS[ratio]
    return float(ratio)


def scan_producer(options):
    """Producer plus the (k0, ratio) defaults for `zscan`."""
    system = options['system']
    label = system_label(options)
    if system in ('fibonacci', 'noble'):
        scheme, window = _scheme_and_window(options)
        s, cut = window.exact_length, options.get('kstar_cut')
        evaluate = partial(cutproject.z_pure_point, scheme, s, kstar_cut=cut)
        return producers.Producer(label, 'scan', None, None, evaluate=evaluate), 0.4, scheme.theta
    if system == 'generic':
        scheme = cutproject.CutProjectScheme.golden()
        s, cut = options.get('s') or 1.5, options.get('kstar_cut')
        evaluate = partial(cutproject.z_pure_point, scheme, s, kstar_cut=cut)
        return producers.Producer(f"generic(s={s:g})", 'scan', None, None, evaluate=evaluate), 0.4, scheme.theta
    if system in ('tm', 'gtm'):
        p, q = (1, 1) if system == 'tm' else (int(options['p']), int(options['q']))
        b = p + q
        evaluate = producers.riesz_scaled(p, q)
        return producers.Producer(label, 'scan', None, None, evaluate=evaluate, log_space=True), b ** -1.0, float(b)
    model = stochastic_model(options)
    return producers.Producer(model.label, 'scan', None, None, evaluate=producers.analytic(model)), 0.1, 2.0


def scan_settings(options):
    producer, k0, ratio = scan_producer(options)
    return producer, options.get('k0') or k0, _ratio(options, ratio), options['depth']


def squarefree_points(options):
    """R(k) rows over `depth` log-spaced k from k0 down to kmin."""
    k0 = options.get('k0') or 0.1
    k_values = np.geomspace(k0, options['kmin'], options['depth'])
    S = options.get('S') or 2 ** 13
    return numbertheory.r_diagnostic(k_values, S)


def mc_rows(options):
    """Analytic against empirical Z at each requested k."""
    model = stochastic_model(options)
    realisation = stochastic.sample(model, options['radius'], options.get('seed'))
    rows = []
    for k in options['k']:
        empirical = stochastic.empirical_Z(realisation, k)
        rows.append({
            'k': k,
            'Z_analytic': stochastic.z_analytic(model, k),
            'Z_empirical': empirical.value,
            'stderr': empirical.stderr,
            'bins': empirical.bins,
        })
        logger.info("%s: Z(%g) analytic %.6g, empirical %.6g +- %.2g",
                    model.label, k, rows[-1]['Z_analytic'], empirical.value, empirical.stderr)
    return model, realisation, rows
