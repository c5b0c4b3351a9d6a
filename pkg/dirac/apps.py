from django.apps import AppConfig


class DiracConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "dirac"
    verbose_name = "Dirac and p-Dirac operators"
