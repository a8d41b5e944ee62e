"""
Access to the HYPERUNIFORM settings dict.

The numerical modules are importable without a configured Django project;
in that case the built-in defaults below are used.
"""
DEFAULTS = {
    'OUTPUT_DIR': 'output',
    'MAX_LETTERS': 10_000_000,
    'SIEVE_LIMIT': 100_000_000,
    'MP_DPS': 50,
    'SEED': 0,
    'KSTAR_CUT_NUMERATOR': 50.0,
    'RENORM_TOL': 1e-12,
    'RENORM_MAX_ITER': 200,
    'CONDITIONING_GAP': 1e-6,
}


def get_setting(name):
    """
    Return one numerical default.

    Args:
        name: key of the HYPERUNIFORM settings dict

    Returns:
        Value from django settings if configured, else the built-in default
    """
    try:
        from django.conf import settings
        if settings.configured:
            return getattr(settings, 'HYPERUNIFORM', {}).get(name, DEFAULTS[name])
    except ImportError:
        pass
    return DEFAULTS[name]
