from django.apps import AppConfig


class EigenAppConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "eigen"
    verbose_name = "Nonlinear eigenvalue problems"
