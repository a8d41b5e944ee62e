"""
Lyapunov spectrum and exponent prediction of an inflation rule.
"""
import math

from ...algebra import lyapunov_spectrum
from ...forms import LyapunovForm
from ...renorm import exponent_report, measure_exponent
from ...serializers import ExponentReportSerializer
from ...substitution import CATALOGUE, catalogue
from ..base import RunCommand, RunOutput, json_writer


class Command(RunCommand):
    help = 'Lyapunov spectrum, shifted spectrum and predicted Z exponent. Systems: ' + ', '.join(CATALOGUE)
    form_class = LyapunovForm
    default_format = 'json'

    def add_run_arguments(self, parser):
        parser.add_argument('--system', required=True, help=', '.join(CATALOGUE))
        parser.add_argument('--p', type=int)
        parser.add_argument('--q', type=int)
        parser.add_argument('--depth', type=int, default=50, help='cocycle depth for --measure')
        parser.add_argument('--count', type=int, default=10, help='wave numbers for --measure')
        parser.add_argument('--measure', action='store_true', help='also measure the exponent from the cocycle')

    def run(self, options):
        rule = catalogue(options['system'], options.get('p'), options.get('q'))
        document = exponent_report(rule)
        shift = math.log(rule.pf_eigenvalue)
        document['shifted_spectrum'] = [
            x - shift if math.isfinite(x) else None for x in lyapunov_spectrum(rule.matrix)
        ]
        if options.get('measure'):
            measurement = measure_exponent(rule, n=options['depth'], count=options['count'], seed=options.get('seed'))
            document['measured_exponent'] = measurement.z_exponent
            document['measured_spread'] = measurement.spread
        self.stdout.write(f"{rule.name}: predicted exponent {document['predicted_exponent']}")
        rows = []
        if document['predicted_exponent'] is not None and 'measured_exponent' in document:
            rows.append({
                'system': rule.name, 'model': 'power', 'measured': document['measured_exponent'],
                'predicted': document['predicted_exponent'], 'tol': 0.1,
                'passed': abs(document['measured_exponent'] - document['predicted_exponent']) <= 0.1,
                'label': 'cocycle',
            })
        return RunOutput(system=rule.name, json=json_writer(ExponentReportSerializer, document), exponents=rows)
