import pandas as pd

from apps.cli.base import EngineCommand, add_kind_argument, add_size_argument
from apps.exact.engines import brute_force_distribution, evolve_distribution
from apps.exact.statistics import distribution_stats, identity_asymptotic_ratio
from apps.permcore.schema import ShuffleKind


class Command(EngineCommand):
    help = 'Exact summary statistics and distance to uniform of one shuffle pass'

    def add_engine_arguments(self, parser):
        add_kind_argument(parser)
        add_size_argument(parser)
        parser.add_argument('--engine', choices=['evolve', 'brute'], default='evolve',
                            help='Exact engine that produces the table')

    def run(self, config):
        if config.engine == 'brute':
            table = brute_force_distribution(config.kind, config.n, threads=config.threads)
        else:
            table = evolve_distribution(config.kind, config.n)

        summary = distribution_stats(table)
        rows = summary.rows()
        if ShuffleKind.parse(config.kind) is ShuffleKind.POSITION_TRANSPOSITION:
            rows.append(('identity_asymptotic_ratio', None, identity_asymptotic_ratio(table)))
        frame = pd.DataFrame(rows, columns=['statistic', 'exact', 'value'])
        return self.report(config, frame)
