from apps.cli.base import EngineCommand, add_kind_argument, add_size_argument
from apps.exact.engines import brute_force_distribution


class Command(EngineCommand):
    help = 'Exact law of one shuffle pass by enumerating all n**n choice sequences (n <= 8)'

    def add_engine_arguments(self, parser):
        add_kind_argument(parser)
        add_size_argument(parser)

    def run(self, config):
        table = brute_force_distribution(config.kind, config.n, threads=config.threads)
        return self.report(config, table.to_frame(), text=table.to_text())
