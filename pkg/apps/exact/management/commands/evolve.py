from apps.cli.base import EngineCommand, add_kind_argument, add_size_argument
from apps.exact.engines import evolve_distribution


class Command(EngineCommand):
    help = 'Exact law of one shuffle pass by evolving the distribution over S_n (n <= 11)'

    def add_engine_arguments(self, parser):
        add_kind_argument(parser)
        add_size_argument(parser)

    def run(self, config):
        table = evolve_distribution(config.kind, config.n)
        return self.report(config, table.to_frame(), text=table.to_text())
