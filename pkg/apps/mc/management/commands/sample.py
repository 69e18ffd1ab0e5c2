import pandas as pd
from django.core.exceptions import ValidationError

from apps.cli.base import KIND_CHOICES, EngineCommand, add_size_argument
from apps.mc.estimators import UNIFORM, Statistic, estimate_marginal_row, estimate_statistic


class Command(EngineCommand):
    help = 'Monte Carlo estimate of a marginal row (--j) or a permutation statistic (--stat)'
    uses_seed = True

    def add_engine_arguments(self, parser):
        parser.add_argument('--kind', choices=KIND_CHOICES + [UNIFORM], required=True,
                            help='Shuffle kind, or uniform for the uniform-permutation baseline')
        add_size_argument(parser)
        parser.add_argument('--j', type=int, help='Card whose final position is estimated')
        parser.add_argument('--stat', choices=[stat.value for stat in Statistic], help='Statistic')
        parser.add_argument('--samples', type=int, required=True, help='Number of sampled shuffles')

    def run(self, config):
        if (config.j is None) == (config.stat is None):
            raise ValidationError("Give exactly one of --j and --stat")

        if config.j is not None:
            row = estimate_marginal_row(config.kind, config.n, config.j, config.samples,
                                        config.seed, config.threads)
            frame = pd.DataFrame({
                'a': range(1, config.n + 1),
                'value': [estimate.value for estimate in row],
                'stderr': [estimate.stderr for estimate in row],
            })
        else:
            estimate = estimate_statistic(config.kind, config.n, config.stat, config.samples,
                                          config.seed, config.threads)
            frame = pd.DataFrame({'statistic': [config.stat], 'value': [estimate.value],
                                  'stderr': [estimate.stderr]})
        return self.report(config, frame, csv_provenance=True)
