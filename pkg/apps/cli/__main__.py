import sys

from .runner import run_cli

sys.exit(run_cli(sys.argv[1:]))
