"""
Django settings for the shuffle lab project.

The project hosts the shuffle engines as Django apps: the command-line
surface is a set of management commands and a small read-only JSON API
is served through Django REST framework.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'shuffle-lab-insecure-development-key')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DJANGO_DEBUG', 'false').lower() == 'true'

ALLOWED_HOSTS = os.environ.get('DJANGO_ALLOWED_HOSTS', '*').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'django.contrib.staticfiles',

    'rest_framework',
    'corsheaders',

    # local apps
    'apps.permcore',
    'apps.exact',
    'apps.limits',
    'apps.mc',
    'apps.cli',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'config.urls'

WSGI_APPLICATION = 'config.wsgi.application'


# No persistence layer: every engine is a pure function and all output goes
# to files or standard output.
DATABASES = {}


# Django REST framework: anonymous, read-only, JSON only
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'DEFAULT_RENDERER_CLASSES': ['rest_framework.renderers.JSONRenderer'],
    'DEFAULT_PARSER_CLASSES': ['rest_framework.parsers.JSONParser'],
    'UNAUTHENTICATED_USER': None,
}

CORS_ALLOW_ALL_ORIGINS = os.environ.get('CORS_ALLOW_ALL_ORIGINS', 'true').lower() == 'true'


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Static files (CSS, JavaScript, Images)
# https://docs.djangoproject.com/en/5.2/howto/static-files/

STATIC_URL = 'static/'


# Logging goes to stderr so command output on stdout stays byte-stable
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': os.environ.get('SHUFFLE_LAB_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Shuffle engines
SHUFFLE_LAB = {
    # Fixed seed used whenever a command is run without --seed
    'DEFAULT_SEED': 271828182,
    'THREADS': int(os.environ.get('SHUFFLE_LAB_THREADS', '1')),
    'BRUTE_FORCE_MAX_N': 8,
    'EVOLVE_MAX_N': 11,
    'BRUTE_FORCE_BLOCK': 1 << 18,
    'MC_BLOCK': 4096,
    'MC_MAX_WORK': 10 ** 10,
    'API_MAX_N': 200,
}
