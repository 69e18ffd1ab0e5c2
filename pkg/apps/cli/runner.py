import os
import sys
from typing import Sequence

from .base import INVALID_ARGUMENTS

ENGINE_COMMANDS = (
    'marginal', 'brute', 'evolve', 'stats',
    'density', 'expect', 'tvbound',
    'sample', 'converge',
)


def run_cli(argv: Sequence[str]) -> int:
    """Run one engine subcommand and return its exit code"""
    argv = list(argv)
    if not argv or argv[0] not in ENGINE_COMMANDS:
        name = argv[0] if argv else ''
        sys.stderr.write(f"Unknown subcommand {name!r}; expected one of {', '.join(ENGINE_COMMANDS)}\n")
        return INVALID_ARGUMENTS

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    from django.core.management import execute_from_command_line

    try:
        execute_from_command_line(['manage.py', *argv])
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0
