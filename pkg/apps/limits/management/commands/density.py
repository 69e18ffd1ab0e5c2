from django.core.exceptions import ValidationError

from apps.cli.base import DENSITY_CHOICES, EngineCommand
from apps.limits.densities import DensityKind, density_grid


def density_parameter(config) -> float:
    """``--b`` for the f densities, ``--x`` for the h densities"""
    which = DensityKind.parse(config.which)
    name = 'b' if which in (DensityKind.F_CARD, DensityKind.F_POS) else 'x'
    other = 'x' if name == 'b' else 'b'
    if getattr(config, other) is not None:
        raise ValidationError(f"{which.value} takes its parameter from --{name}, not --{other}")
    value = getattr(config, name)
    if value is None:
        raise ValidationError(f"{which.value} needs --{name}")
    return value


class Command(EngineCommand):
    help = 'Limiting density on an equally spaced grid (columns t, density)'

    def add_engine_arguments(self, parser):
        parser.add_argument('--which', choices=DENSITY_CHOICES, required=True, help='Density')
        parser.add_argument('--b', type=float, help='Card parameter of f_card and f_pos')
        parser.add_argument('--x', type=float, help='Position parameter of h_card and h_pos')
        parser.add_argument('--grid', type=int, default=1000, help='Number of grid intervals')

    def run(self, config):
        frame = density_grid(config.which, density_parameter(config), config.grid)
        return self.report(config, frame)
