"""
Generate a point patch or a stochastic realisation and write it as CSV.
"""
from ...dispatch import generate, system_label
from ...forms import GENERATE_SYSTEMS, GenerateForm
from ..base import RunCommand, RunOutput


class Command(RunCommand):
    help = 'Generate a patch on [-R, R]. Systems: ' + ', '.join(GENERATE_SYSTEMS)
    form_class = GenerateForm

    def add_run_arguments(self, parser):
        parser.add_argument('--system', required=True, help=', '.join(GENERATE_SYSTEMS))
        parser.add_argument('--radius', type=float, required=True)
        parser.add_argument('--p', type=float, help='noble/gtm parameter or probability')
        parser.add_argument('--q', type=float, help='gtm parameter or Markov stay probability')
        parser.add_argument('--u', type=float, help='random tiling length u')
        parser.add_argument('--v', type=float, help='random tiling length v')
        parser.add_argument('--weighting', choices=['01', 'pm'], default='01')

    def run(self, options):
        patch = generate(options)
        self.stdout.write(f"{len(patch)} points")
        return RunOutput(system=system_label(options), csv=patch.write_csv)
