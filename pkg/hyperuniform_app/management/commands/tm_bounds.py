"""
Thue-Morse distribution function bracket at k = 2**-n.
"""
from ...forms import TmBoundsForm
from ...riesz import (
    TM_ALPHA, tm_beta, tm_bound_report, tm_lower_constants, tm_prefactor_exponent, tm_upper_constants,
)
from ...serializers import TMBoundsDocumentSerializer
from ..base import RunCommand, RunOutput, json_writer


class Command(RunCommand):
    help = 'Lower and upper bounds of F(2**-n) with the self-similar estimate between them'
    form_class = TmBoundsForm
    default_format = 'json'

    def add_run_arguments(self, parser):
        parser.add_argument('--n', type=int, default=10)
        parser.add_argument('--N', type=int, default=100_000, help='terms of the beta series')
        parser.add_argument('--constants', action='store_true', help='also extract the asymptotic constants')

    def run(self, options):
        bounds = tm_bound_report(options['n'], options['N'])
        document = {'bounds': bounds, 'alpha': TM_ALPHA}
        if options.get('constants'):
            document['upper_constant'] = tm_upper_constants().limit
            document['lower_constant'] = tm_lower_constants().limit
            document['beta'] = tm_beta(options['N'])
            document['prefactor_exponent'] = tm_prefactor_exponent()
        self.stdout.write(f"{bounds['lower']:.6e} <= F(2^-{options['n']}) <= {bounds['upper']:.6e}")
        return RunOutput(system='thue-morse', json=json_writer(TMBoundsDocumentSerializer, document))
