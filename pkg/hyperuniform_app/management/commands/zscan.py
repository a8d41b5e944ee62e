"""
Scan Z(k) along a geometric grid towards k = 0.
"""
from ...dispatch import scan_settings, squarefree_points, system_label
from ...exports import write_rows
from ...forms import ZSCAN_SYSTEMS, ZscanForm
from ...scaling import scan
from ...serializers import ScanSerializer
from ..base import RunCommand, RunOutput, json_writer


class Command(RunCommand):
    help = 'Scan Z(k) at k0/ratio**l. Systems: ' + ', '.join(ZSCAN_SYSTEMS)
    form_class = ZscanForm

    def add_run_arguments(self, parser):
        parser.add_argument('--system', required=True, help=', '.join(ZSCAN_SYSTEMS))
        parser.add_argument('--k0', type=float)
        parser.add_argument('--ratio', default='auto', help='number > 1, golden, silver or auto')
        parser.add_argument('--depth', type=int, default=10)
        parser.add_argument('--kstar-cut', type=float, help='cut on k*|k_star| (default 50/s)')
        parser.add_argument('--s', type=float, help='window length for the generic system')
        parser.add_argument('--p', type=float)
        parser.add_argument('--q', type=float)
        parser.add_argument('--u', type=float)
        parser.add_argument('--v', type=float)
        parser.add_argument('--weighting', choices=['01', 'pm'], default='01')
        parser.add_argument('--beta', type=int)
        parser.add_argument('--S', type=int, default=2 ** 13, help='number of square-free generators')
        parser.add_argument('--kmin', type=float, help='smallest k of a square-free scan')

    def run(self, options):
        label = system_label(options)
        if options['system'] == 'squarefree':
            points = squarefree_points(options)
            rows = [(p.k, p.S, p.Z, p.R) for p in points]
            return RunOutput(system=label, csv=lambda handle: write_rows(handle, ['k', 'S', 'Z', 'R'], rows))
        producer, k0, ratio, depth = scan_settings(options)
        result = scan(producer, k0, ratio, depth, name=producer.name)
        return RunOutput(system=label, csv=result.write_csv, json=json_writer(ScanSerializer, result))
