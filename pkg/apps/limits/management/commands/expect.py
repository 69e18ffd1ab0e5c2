import numpy as np
import pandas as pd

from apps.cli.base import EngineCommand
from apps.limits.analysis import (
    ExpectationKind, expectation_extrema, expected_position, expected_position_quadrature,
)


class Command(EngineCommand):
    help = 'Expected limiting rescaled position or card number, as a curve, a point or its extrema'

    def add_engine_arguments(self, parser):
        parser.add_argument('--which', choices=[kind.value for kind in ExpectationKind], required=True)
        parser.add_argument('--s', type=float, help='Single parameter value')
        parser.add_argument('--grid', type=int, default=100, help='Curve intervals when --s is absent')
        parser.add_argument('--extrema', action='store_true', default=None,
                            help='Report the maximizer and minimizer instead of values')

    def run(self, config):
        if config.extrema:
            extrema = expectation_extrema(config.which)
            frame = pd.DataFrame([
                ('max', extrema.argmax, extrema.max_value),
                ('min', extrema.argmin, extrema.min_value),
            ], columns=['extremum', 's', 'value'])
            return self.report(config, frame)

        points = [config.s] if config.s is not None else np.linspace(0.0, 1.0, config.grid + 1)
        frame = pd.DataFrame({
            's': [float(s) for s in points],
            'value': [expected_position(config.which, s) for s in points],
            'quadrature': [expected_position_quadrature(config.which, s) for s in points],
        })
        return self.report(config, frame)
