from django.apps import AppConfig


class CriticalConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "critical"
    verbose_name = "Critical points of the energy"
