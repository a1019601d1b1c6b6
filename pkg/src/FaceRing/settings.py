"""
Django settings for FaceRing project.

The project has no web surface and no database: it hosts the toric app and
its management commands.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('FACERING_SECRET_KEY', 'django-insecure-facering-local-only')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'toric',
]

MIDDLEWARE = []

DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Toric face rings

TORIC = {
    'DEFAULT_BOX': None,
    'NMAX': 12,
    'R': 2,
    'SCHEMA_VERSION': 1,
    'SEARCH_LIMIT': 200_000,
}


# Logging goes to stderr; stdout carries the JSON reports only.

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'toric': {
            'handlers': ['console'],
            'level': os.environ.get('TORIC_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
