from django.apps import AppConfig


class HyperuniformAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hyperuniform_app'
    verbose_name = 'Hyperuniformity scaling'
