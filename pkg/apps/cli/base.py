import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import ShuffleKind

from .config import FORMATS, RunConfig
from .output import Report, emit

logger = logging.getLogger(__name__)

INVALID_ARGUMENTS = 2
RESOURCE_LIMIT = 3

KIND_CHOICES = [kind.value for kind in ShuffleKind]
DENSITY_CHOICES = ['f_card', 'f_pos', 'h_card', 'h_pos']


def error_message(error: ValidationError) -> str:
    return '; '.join(error.messages)


class EngineCommand(BaseCommand):
    """Base for every engine command: shared flags, output routing and exit codes.

    Subclasses add their own flags in ``add_engine_arguments`` and return a
    ``Report`` from ``run``.
    """
    uses_seed = False

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit('.', 1)[-1]

    def add_engine_arguments(self, parser):
        pass

    def add_arguments(self, parser):
        self.add_engine_arguments(parser)
        if self.uses_seed:
            parser.add_argument('--seed', type=int, default=None,
                                help='64-bit seed (default: SHUFFLE_LAB["DEFAULT_SEED"])')
        parser.add_argument('--format', choices=FORMATS, default='csv',
                            help='Output format')
        parser.add_argument('--out', type=str, default=None,
                            help='Write to this path instead of standard output')
        parser.add_argument('--threads', type=int, default=None,
                            help='Worker cap (default: SHUFFLE_LAB_THREADS)')

    def run(self, config: RunConfig) -> Report:
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            config = RunConfig.from_options(self.command_name, options)
            report = self.run(config)
            emit(report, config, self.stdout)
        except ResourceLimitError as e:
            logger.warning("%s rejected by a resource guard: %s", self.command_name, error_message(e))
            raise CommandError(error_message(e), returncode=RESOURCE_LIMIT)
        except ValidationError as e:
            raise CommandError(error_message(e), returncode=INVALID_ARGUMENTS)

    def report(self, config: RunConfig, frame, csv_provenance: bool = False, text=None) -> Report:
        return Report(frame, config.provenance(), csv_provenance, text)


def add_kind_argument(parser, required: bool = True):
    parser.add_argument('--kind', choices=KIND_CHOICES, required=required, help='Shuffle kind')


def add_size_argument(parser):
    parser.add_argument('--n', type=int, required=True, help='Deck size')
