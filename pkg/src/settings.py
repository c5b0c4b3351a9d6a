"""
Django settings for src project.

Generated by 'django-admin startproject' using Django 5.2.3.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config("SECRET_KEY", default="pdirac-local-development-key")

DEBUG = config("DEBUG", default=False, cast=bool)

ALLOWED_HOSTS = config(
    "ALLOWED_HOSTS", default="localhost,127.0.0.1", cast=lambda v: v.split(",")
)


# Application definition

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "rest_framework",
    "clifford",
    "lattice",
    "dirac",
    "energy",
    "eigen",
    "critical",
    "runs",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "src.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "src.wsgi.application"


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases
# Only the run ledger (runs.Run) lives in the database.

DATABASES = {
    "default": {
        "ENGINE": config("PDIRAC_DB_ENGINE", "django.db.backends.sqlite3"),
        "NAME": config("PDIRAC_DB_PATH", default=str(BASE_DIR / "db.sqlite3")),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


# Static files (CSS, JavaScript, Images)
# https://docs.djangoproject.com/en/5.2/howto/static-files/

STATIC_URL = "static/"

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
}


# Numerical defaults, overridable per run config

PDIRAC = {
    "OUTPUT_DIR": config("PDIRAC_OUTPUT_DIR", default=str(BASE_DIR / "output")),
    "EIGEN_TOLERANCE": config("PDIRAC_EIGEN_TOLERANCE", default=1e-8, cast=float),
    "EIGEN_MAX_ITER": config("PDIRAC_EIGEN_MAX_ITER", default=5000, cast=int),
    "EIGEN_RESTARTS": config("PDIRAC_EIGEN_RESTARTS", default=8, cast=int),
    "SOLVE_TOLERANCE": config("PDIRAC_SOLVE_TOLERANCE", default=1e-6, cast=float),
    "SOLVE_MAX_ITER": config("PDIRAC_SOLVE_MAX_ITER", default=20000, cast=int),
    "PATH_POINTS": config("PDIRAC_PATH_POINTS", default=64, cast=int),
    "GALERKIN_K": config("PDIRAC_GALERKIN_K", default=32, cast=int),
}


# Logging

LOG_LEVEL = config("PDIRAC_LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {"handlers": ["console"], "level": "WARNING"},
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in (
            "shared",
            "clifford",
            "lattice",
            "dirac",
            "energy",
            "eigen",
            "critical",
            "runs",
        )
    },
}
