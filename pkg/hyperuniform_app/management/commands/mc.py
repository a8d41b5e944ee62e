"""
Monte Carlo check of the analytic Z(k) of a stochastic model.
"""
from ...dispatch import mc_rows
from ...exports import write_rows
from ...forms import MC_SYSTEMS, McForm
from ...serializers import McDocumentSerializer
from ..base import RunCommand, RunOutput, json_writer

COLUMNS = ('k', 'Z_analytic', 'Z_empirical', 'stderr', 'bins')


class Command(RunCommand):
    help = 'Compare analytic and periodogram Z(k). Systems: ' + ', '.join(MC_SYSTEMS)
    form_class = McForm

    def add_run_arguments(self, parser):
        parser.add_argument('--system', required=True, help=', '.join(MC_SYSTEMS))
        parser.add_argument('--radius', type=float, default=10_000.0)
        parser.add_argument('--k', default='0.1,0.2,0.3', help='comma-separated wave numbers')
        parser.add_argument('--p', type=float)
        parser.add_argument('--q', type=float)
        parser.add_argument('--u', type=float)
        parser.add_argument('--v', type=float)
        parser.add_argument('--weighting', choices=['01', 'pm'], default='01')

    def run(self, options):
        model, realisation, rows = mc_rows(options)
        table = [tuple(row[name] for name in COLUMNS) for row in rows]
        document = {
            'model': model.label, 'R': realisation.R, 'seed': realisation.seed,
            'points': len(realisation), 'rows': rows,
        }
        for row in rows:
            self.stdout.write(
                f"k={row['k']:g}  analytic={row['Z_analytic']:.6g}  "
                f"empirical={row['Z_empirical']:.6g} +- {row['stderr']:.2g}"
            )
        return RunOutput(
            system=model.variant,
            csv=lambda handle: write_rows(handle, COLUMNS, table),
            json=json_writer(McDocumentSerializer, document),
        )
