import pandas as pd
from django.core.exceptions import ValidationError

from apps.cli.base import EngineCommand, add_kind_argument, add_size_argument
from apps.exact.formulas import METHODS, exact_marginal_matrix, exact_offdiag_marginal


class Command(EngineCommand):
    help = 'Closed-form marginal matrix of a transposition shuffle, or a single off-diagonal entry'

    def add_engine_arguments(self, parser):
        add_kind_argument(parser)
        add_size_argument(parser)
        parser.add_argument('--j', type=int, help='Card number (needs --a)')
        parser.add_argument('--a', type=int, help='Final position (needs --j)')
        parser.add_argument('--method', choices=METHODS, default='hockey',
                            help='Evaluation route of the off-diagonal sums')

    def run(self, config):
        if (config.j is None) != (config.a is None):
            raise ValidationError("--j and --a must be given together")
        if config.j is None:
            matrix = exact_marginal_matrix(config.kind, config.n, config.method)
            return self.report(config, matrix.to_frame())

        value = exact_offdiag_marginal(config.kind, config.n, config.j, config.a, config.method)
        frame = pd.DataFrame({'j': [config.j], 'a': [config.a], 'probability': [value]})
        return self.report(config, frame)
