import pandas as pd

from apps.cli.base import DENSITY_CHOICES, EngineCommand
from apps.limits.analysis import TV_GRID, tv_lower_bound


class Command(EngineCommand):
    help = 'Largest total variation distance between a limiting density and the uniform density'

    def add_engine_arguments(self, parser):
        parser.add_argument('--which', choices=DENSITY_CHOICES, default='f_card')
        parser.add_argument('--grid', type=int, default=TV_GRID, help='Coarse grid points on the parameter')

    def run(self, config):
        value, argmax = tv_lower_bound(config.which, config.grid)
        return self.report(config, pd.DataFrame({'value': [value], 'argmax_b': [argmax]}))
