"""
Replay a recorded run or a RunConfig JSON file.
"""
import json

from django.core.management import call_command
from django.core.management.base import BaseCommand, CommandError

from ...forms import ReproForm
from ...models import RunRecord
from ...serializers import RunConfigSerializer
from ..base import CONFIG_ERROR, form_errors


class Command(BaseCommand):
    help = 'Replay a run from the database (--run-id) or from a config file (--config)'

    def add_arguments(self, parser):
        parser.add_argument('--run-id', type=int)
        parser.add_argument('--config', help='RunConfig JSON file')
        parser.add_argument('--output', help='write to this path instead of the recorded one')

    def load(self, options):
        if options['run_id'] is not None:
            try:
                return RunRecord.objects.get(pk=options['run_id']).config
            except RunRecord.DoesNotExist:
                raise CommandError(f"No run #{options['run_id']}", returncode=CONFIG_ERROR)
        try:
            with open(options['config'], encoding='utf-8') as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise CommandError(f"Cannot read {options['config']}: {exc}", returncode=CONFIG_ERROR) from exc

    def handle(self, *args, **options):
        form = ReproForm(data={name: options.get(name) for name in ReproForm.base_fields})
        if not form.is_valid():
            raise CommandError(form_errors(form), returncode=CONFIG_ERROR)
        serializer = RunConfigSerializer(data=self.load(form.cleaned_data))
        if not serializer.is_valid():
            raise CommandError(f"Invalid run config: {serializer.errors}", returncode=CONFIG_ERROR)
        config = serializer.validated_data
        replay = {name: value for name, value in config['options'].items() if value is not None}
        if form.cleaned_data.get('output'):
            replay['output'] = form.cleaned_data['output']
        call_command(config['command'], stdout=self.stdout, stderr=self.stderr, **replay)
