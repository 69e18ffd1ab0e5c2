from django.apps import AppConfig


class PermcoreConfig(AppConfig):
    name = 'apps.permcore'
    verbose_name = 'Permutations and shuffle steps'
