"""
Django settings for app project.

Generated by 'django-admin startproject' using Django 3.2.25.

The project has no web surface: the verification engine runs through
management commands in the ``core`` app. Engine limits are read from the
environment (a ``.env`` file at the repository root is honoured).

For the full list of settings and their values, see
https://docs.djangoproject.com/en/3.2/ref/settings/
"""

from pathlib import Path
import os

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR.parent / '.env')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'DJANGO_SECRET_KEY',
    'django-insecure-unitary-saxl-local-only',
)

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'groups',
    'bounds',
]

MIDDLEWARE = []

# Nothing is persisted; reports go to files or stdout.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/3.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Verification engine

SAXL_TOOL_VERSION = os.environ.get('SAXL_TOOL_VERSION', '1.0.0')

# Largest permutation domain an action may be built on.
SAXL_CAP = int(os.environ.get('SAXL_CAP', 50000))

# Largest p^(2m) for which a field tower is constructed.
SAXL_FIELD_MAX_ORDER = int(os.environ.get('SAXL_FIELD_MAX_ORDER', 2 ** 20))

# Largest group listed element by element (closures, class census).
SAXL_ENUMERATION_CAP = int(os.environ.get('SAXL_ENUMERATION_CAP', 6000000))

# Largest listed permutation group, counted in table entries (elements
# times degree).
SAXL_PERM_TABLE_CAP = int(os.environ.get('SAXL_PERM_TABLE_CAP', 5 * 10 ** 7))

SAXL_JOBS = int(os.environ.get('SAXL_JOBS', 1))

SAXL_GRID_MAX = int(os.environ.get('SAXL_GRID_MAX', 10 ** 9))
SAXL_PSL_GRID_MAX = int(os.environ.get('SAXL_PSL_GRID_MAX', 10 ** 4))

REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        name: {
            'handlers': ['console'],
            'level': os.environ.get('SAXL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        }
        for name in ('core', 'groups', 'bounds')
    },
}
