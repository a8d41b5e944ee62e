"""
Forms validating management-command options into RunConfig dicts.
"""
import math

from django import forms
from django.core.exceptions import ValidationError

from .producers import registry
from .substitution import CATALOGUE

STOCHASTIC_SYSTEMS = ('poisson', 'lattice', 'bernoulli', 'markov', 'random-tiling', 'bernoullised-rs')
GENERATE_SYSTEMS = CATALOGUE + STOCHASTIC_SYSTEMS
ZSCAN_SYSTEMS = ('fibonacci', 'noble', 'generic', 'tm', 'gtm', 'squarefree', 'rmt') + STOCHASTIC_SYSTEMS
MC_SYSTEMS = STOCHASTIC_SYSTEMS
NAMED_RATIOS = {
    'golden': (1 + math.sqrt(5)) / 2,
    'silver': 1 + math.sqrt(2),
}


def _check_system(value, known):
    if value not in known:
        raise ValidationError(f"Unknown system '{value}'. Known systems: {', '.join(known)}")
    return value


class RunForm(forms.Form):
    """Options shared by every command."""
    output = forms.CharField(required=False)
    format = forms.ChoiceField(choices=[('csv', 'CSV'), ('json', 'JSON')], required=False)
    seed = forms.IntegerField(required=False, min_value=0)

    def clean_format(self):
        return self.cleaned_data.get('format') or 'csv'

    def config(self):
        """Plain-data RunConfig options; lists go back to comma-separated text."""
        return {
            name: ','.join(str(x) for x in value) if isinstance(value, list) else value
            for name, value in self.cleaned_data.items()
        }


class SystemParametersMixin:
    """Checks that the parameters a system needs were supplied."""

    def _require(self, cleaned, *names):
        for name in names:
            if cleaned.get(name) is None:
                self.add_error(name, f"--{name.replace('_', '-')} is required for {cleaned['system']}")

    def _require_integer(self, cleaned, *names):
        for name in names:
            value = cleaned.get(name)
            if value is None or value != int(value) or value < 1:
                self.add_error(name, f"--{name} must be an integer >= 1 for {cleaned['system']}")

    def check_parameters(self, cleaned):
        system = cleaned.get('system')
        if system in ('noble',):
            self._require_integer(cleaned, 'p')
        elif system == 'gtm':
            self._require_integer(cleaned, 'p', 'q')
        elif system == 'bernoulli':
            self._require(cleaned, 'p')
        elif system == 'markov':
            self._require(cleaned, 'p', 'q')
        elif system == 'random-tiling':
            self._require(cleaned, 'u', 'v', 'p')
        elif system == 'rmt':
            if cleaned.get('beta') not in (1, 2, 4):
                self.add_error('beta', "--beta must be 1, 2 or 4")
        return cleaned


class StochasticFields(forms.Form):
    p = forms.FloatField(required=False)
    q = forms.FloatField(required=False)
    u = forms.FloatField(required=False, min_value=0)
    v = forms.FloatField(required=False, min_value=0)
    weighting = forms.ChoiceField(choices=[('01', '0/1'), ('pm', '+-1')], required=False)

    def clean_weighting(self):
        return self.cleaned_data.get('weighting') or '01'


class GenerateForm(SystemParametersMixin, StochasticFields, RunForm):
    system = forms.CharField()
    radius = forms.FloatField()

    def clean_system(self):
        return _check_system(self.cleaned_data['system'], GENERATE_SYSTEMS)

    def clean_radius(self):
        radius = self.cleaned_data['radius']
        if radius <= 0:
            raise ValidationError("Radius must be positive.")
        return radius

    def clean(self):
        return self.check_parameters(super().clean())


class ZscanForm(SystemParametersMixin, StochasticFields, RunForm):
    system = forms.CharField()
    k0 = forms.FloatField(required=False)
    ratio = forms.CharField(required=False)
    depth = forms.IntegerField(min_value=3)
    kstar_cut = forms.FloatField(required=False)
    s = forms.FloatField(required=False)
    beta = forms.IntegerField(required=False)
    S = forms.IntegerField(required=False, min_value=1)
    kmin = forms.FloatField(required=False)

    def clean_system(self):
        return _check_system(self.cleaned_data['system'], ZSCAN_SYSTEMS)

    def clean_ratio(self):
        ratio = str(self.cleaned_data.get('ratio') or 'auto').strip().lower()
        if ratio == 'auto' or ratio in NAMED_RATIOS:
            return ratio
        try:
            value = float(ratio)
        except ValueError:
            raise ValidationError(f"Ratio must be a number > 1, auto, golden or silver, got '{ratio}'.")
        if not value > 1:
            raise ValidationError("Ratio must exceed 1.")
        return value

    def clean_kstar_cut(self):
        cut = self.cleaned_data.get('kstar_cut')
        if cut is not None and cut <= 0:
            raise ValidationError("kstar cut must be positive.")
        return cut

    def clean(self):
        cleaned = self.check_parameters(super().clean())
        system = cleaned.get('system')
        if system in ('tm', 'gtm') and cleaned.get('ratio') not in (None, 'auto'):
            self.add_error('ratio', "tm and gtm scans run on the grid (p+q)**-n; use --ratio auto")
        if system == 'squarefree':
            kmin, k0 = cleaned.get('kmin'), cleaned.get('k0') or 0.1
            if kmin is None or not 0 < kmin < k0:
                self.add_error('kmin', f"squarefree scans need 0 < --kmin < k0 = {k0:g}")
        k0 = cleaned.get('k0')
        if k0 is not None and k0 <= 0:
            self.add_error('k0', "k0 must be positive.")
        return cleaned


class FitForm(RunForm):
    input = forms.CharField(required=False)
    model = forms.ChoiceField(choices=[('power', 'power'), ('log-quadratic', 'log-quadratic')], required=False)
    predicted = forms.FloatField(required=False)
    tol = forms.FloatField(required=False, min_value=0)
    drop = forms.IntegerField(required=False, min_value=0)
    catalogue = forms.CharField(required=False)

    def clean_model(self):
        return self.cleaned_data.get('model') or 'power'

    def clean_catalogue(self):
        names = self.cleaned_data.get('catalogue')
        if not names:
            return None
        if names == 'all':
            return list(registry())
        if isinstance(names, str):
            names = names.split(',')
        selected = [name.strip() for name in names if name.strip()]
        unknown = [name for name in selected if name not in registry()]
        if unknown:
            raise ValidationError(
                f"Unknown catalogue entries {', '.join(unknown)}. Known: {', '.join(registry())}"
            )
        if not selected:
            raise ValidationError("Empty catalogue selection.")
        return selected

    def clean(self):
        cleaned = super().clean()
        if bool(cleaned.get('input')) == bool(cleaned.get('catalogue')):
            raise ValidationError("Give exactly one of --input and --catalogue.")
        return cleaned


class LyapunovForm(RunForm):
    system = forms.CharField()
    p = forms.IntegerField(required=False, min_value=1)
    q = forms.IntegerField(required=False, min_value=1)
    depth = forms.IntegerField(min_value=1)
    count = forms.IntegerField(min_value=1)
    measure = forms.BooleanField(required=False)

    def clean_system(self):
        return _check_system(self.cleaned_data['system'], CATALOGUE)

    def clean(self):
        cleaned = super().clean()
        system = cleaned.get('system')
        if system == 'noble' and cleaned.get('p') is None:
            self.add_error('p', "--p is required for noble")
        if system == 'gtm' and (cleaned.get('p') is None or cleaned.get('q') is None):
            self.add_error('p', "--p and --q are required for gtm")
        return cleaned


class McForm(SystemParametersMixin, StochasticFields, RunForm):
    system = forms.CharField()
    radius = forms.FloatField()
    k = forms.CharField()

    def clean_system(self):
        return _check_system(self.cleaned_data['system'], MC_SYSTEMS)

    def clean_radius(self):
        radius = self.cleaned_data['radius']
        if radius <= 0:
            raise ValidationError("Radius must be positive.")
        return radius

    def clean_k(self):
        raw = self.cleaned_data['k']
        items = raw.split(',') if isinstance(raw, str) else raw
        try:
            values = [float(x) for x in items if str(x).strip()]
        except ValueError:
            raise ValidationError("--k must be a comma-separated list of numbers.")
        if not values or any(x <= 0 for x in values):
            raise ValidationError("--k values must be positive.")
        return values

    def clean(self):
        return self.check_parameters(super().clean())


class TmBoundsForm(RunForm):
    n = forms.IntegerField(min_value=1)
    N = forms.IntegerField(min_value=1)
    constants = forms.BooleanField(required=False)


class ReproForm(forms.Form):
    run_id = forms.IntegerField(required=False, min_value=1)
    config = forms.CharField(required=False)
    output = forms.CharField(required=False)

    def clean(self):
        cleaned = super().clean()
        if (cleaned.get('run_id') is None) == (not cleaned.get('config')):
            raise ValidationError("Give exactly one of --run-id and --config.")
        return cleaned
