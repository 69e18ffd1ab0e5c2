from django.apps import AppConfig


class MonteCarloConfig(AppConfig):
    name = 'apps.mc'
    verbose_name = 'Monte Carlo estimation'
