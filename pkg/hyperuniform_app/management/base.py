"""
Shared plumbing for the run commands: option validation, error mapping,
output files and run records.
"""
import logging
from dataclasses import dataclass, field

from django.core.management.base import BaseCommand, CommandError
from django.db import transaction

from ..exceptions import ConfigurationError, NumericalError
from ..exports import default_output_path, dump_json, open_output, sha256_of
from ..models import ExponentRecord, RunRecord

logger = logging.getLogger(__name__)

CONFIG_ERROR = 2
NUMERICAL_ERROR = 3


@dataclass
class RunOutput:
    """What a command produced; json and csv are writers taking a handle."""
    system: str
    csv: object = None
    json: object = None
    exponents: list = field(default_factory=list)


def form_errors(form):
    messages = []
    for name, errors in form.errors.items():
        prefix = '' if name == '__all__' else f"--{name.replace('_', '-')}: "
        messages.extend(prefix + str(error) for error in errors)
    return '; '.join(messages)


class RunCommand(BaseCommand):
    """
    Base class for commands that compute something and write one file.

    Subclasses set `form_class` and implement `add_run_arguments` and
    `run(options) -> RunOutput`.
    """
    form_class = None
    default_format = 'csv'

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def add_arguments(self, parser):
        self.add_run_arguments(parser)
        parser.add_argument('--output', help="output file ('-' for stdout; default under HYPERUNIFORM_OUTPUT_DIR)")
        parser.add_argument('--format', choices=['csv', 'json'], default=self.default_format)
        parser.add_argument('--seed', type=int, default=None, help='RNG seed (default HYPERUNIFORM_SEED)')
        parser.add_argument('--record', action='store_true', help='store the run in the database')

    def add_run_arguments(self, parser):
        pass

    def run(self, options):
        raise NotImplementedError

    def validate(self, options):
        names = self.form_class.base_fields
        form = self.form_class(data={name: options.get(name) for name in names})
        if not form.is_valid():
            raise CommandError(form_errors(form), returncode=CONFIG_ERROR)
        return form

    def handle(self, *args, **options):
        form = self.validate(options)
        config = {'command': self.command_name, 'options': form.config()}
        try:
            result = self.run(form.cleaned_data)
        except ConfigurationError as exc:
            raise CommandError(str(exc), returncode=CONFIG_ERROR) from exc
        except NumericalError as exc:
            raise CommandError(str(exc), returncode=NUMERICAL_ERROR) from exc

        fmt = form.cleaned_data['format']
        writer = result.json if fmt == 'json' else result.csv
        if writer is None:
            raise CommandError(f"{self.command_name} has no {fmt} output", returncode=CONFIG_ERROR)
        path = form.cleaned_data.get('output') or default_output_path(self.command_name, result.system, fmt)
        with open_output(path) as handle:
            writer(handle)
        if str(path) != '-':
            self.stderr.write(f"Wrote {path}")
        logger.info("%s: wrote %s", self.command_name, path)

        if options.get('record'):
            record = self.record(config, result, path, fmt)
            self.stderr.write(f"Recorded run #{record.pk}")

    @transaction.atomic
    def record(self, config, result, path, fmt):
        run = RunRecord.objects.create(
            command=self.command_name,
            system=result.system,
            config=config,
            output_path=str(path),
            output_format=fmt,
            seed=config['options'].get('seed'),
            output_sha256=sha256_of(path),
        )
        for row in result.exponents:
            ExponentRecord.objects.create(
                run=run,
                system=row['system'],
                model=row['model'],
                measured=row['measured'],
                predicted=row['predicted'],
                tolerance=row['tol'],
                passed=row['passed'],
                label=row['label'],
            )
        return run


def json_writer(serializer_class, instance):
    def write(handle):
        dump_json(serializer_class(instance).data, handle)
    return write
