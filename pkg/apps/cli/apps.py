from django.apps import AppConfig


class CommandLineConfig(AppConfig):
    name = 'apps.cli'
    verbose_name = 'Command-line plumbing'
