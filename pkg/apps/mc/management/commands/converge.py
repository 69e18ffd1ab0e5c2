from apps.cli.base import EngineCommand
from apps.mc.estimators import MODES, convergence_report


class Command(EngineCommand):
    help = 'n times the finite-n marginal against the limiting density, for each n in --n-list'
    uses_seed = True

    def add_engine_arguments(self, parser):
        parser.add_argument('--kind', choices=['card', 'pos'], required=True, help='Shuffle kind')
        parser.add_argument('--b', type=float, required=True, help='Rescaled card number')
        parser.add_argument('--x', type=float, required=True, help='Rescaled position')
        parser.add_argument('--n-list', dest='n_list', type=int, nargs='+', required=True,
                            help='Ascending deck sizes')
        parser.add_argument('--mode', choices=MODES, default='exact', help='Exact formula or Monte Carlo')
        parser.add_argument('--samples', type=int, help='Samples per deck size in mc mode')

    def run(self, config):
        frame = convergence_report(config.kind, config.b, config.x, config.n_list, config.mode,
                                   config.samples, config.seed, config.threads)
        return self.report(config, frame, csv_provenance=True)
