#!/usr/bin/env python
"""Command-line entry point of the shuffle lab.

Engine subcommands (``brute``, ``density``, ``sample`` ...) go through the
engine runner so their exit codes are 0, 2 or 3; everything else is handed
to Django as usual (``test``, ``runserver``, ``help``).
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    from apps.cli.runner import ENGINE_COMMANDS, run_cli
    if len(sys.argv) > 1 and sys.argv[1] in ENGINE_COMMANDS:
        sys.exit(run_cli(sys.argv[1:]))
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
