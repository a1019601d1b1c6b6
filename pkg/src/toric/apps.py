from django.apps import AppConfig


class ToricConfig(AppConfig):
    name = 'toric'
    verbose_name = 'Toric face rings'
