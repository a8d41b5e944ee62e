"""
Fit scaling laws to a scan file or to the catalogue of standard producers.
"""
from ...exceptions import ConfigurationError
from ...exports import dump_json
from ...forms import FitForm
from ...producers import fit_catalogue
from ...scaling import DEFAULT_DROP, fit_log_quadratic, fit_power, read_scan_csv, report
from ...serializers import ScalingReportSerializer
from ..base import RunCommand, RunOutput


class Command(RunCommand):
    help = 'Fit power or log-quadratic laws and compare with the predicted exponents'
    form_class = FitForm
    default_format = 'json'

    def add_run_arguments(self, parser):
        parser.add_argument('--input', help='scan CSV with k/log_k and Z/log_Z columns')
        parser.add_argument('--model', choices=['power', 'log-quadratic'], default='power')
        parser.add_argument('--predicted', type=float)
        parser.add_argument('--tol', type=float)
        parser.add_argument('--drop', type=int, help=f'leading samples to skip (power default {DEFAULT_DROP})')
        parser.add_argument('--catalogue', help="'all' or comma-separated producer names")

    def run(self, options):
        if options.get('catalogue'):
            scaling_report = fit_catalogue(options['catalogue'], seed=options.get('seed'))
            system = 'catalogue'
        else:
            try:
                with open(options['input'], newline='', encoding='utf-8') as handle:
                    result = read_scan_csv(handle, producer=options['input'])
            except OSError as exc:
                raise ConfigurationError(f"cannot read {options['input']}: {exc}") from exc
            if options['model'] == 'log-quadratic':
                fit = fit_log_quadratic(result, options.get('predicted'), options.get('tol') or 0.05,
                                        drop=options.get('drop') or 0)
            else:
                drop = DEFAULT_DROP if options.get('drop') is None else options['drop']
                fit = fit_power(result, options.get('predicted'), options.get('tol') or 0.1, drop=drop)
            scaling_report = report(fit)
            system = 'input'
        self.stdout.write(scaling_report.as_table())

        def write_json(handle):
            dump_json(ScalingReportSerializer(
                {'rows': scaling_report.rows, 'all_passed': scaling_report.all_passed}
            ).data, handle)
        return RunOutput(system=system, csv=scaling_report.write_csv, json=write_json,
                         exponents=list(scaling_report.rows))
