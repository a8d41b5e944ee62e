"""
Django settings for hyperuniform project.
"""

from pathlib import Path

import environ

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

#
# Load environment variables from .env (project root) so the output
# directory and numerical budgets can be set per checkout.
#
try:
    from dotenv import load_dotenv  # python-dotenv
    load_dotenv(BASE_DIR / ".env")
except Exception:
    # Without python-dotenv the real OS environment is still honoured.
    pass

env = environ.Env(
    DEBUG=(bool, False),
    HYPERUNIFORM_LOG_LEVEL=(str, 'INFO'),
    HYPERUNIFORM_MAX_LETTERS=(int, 10_000_000),
    HYPERUNIFORM_SIEVE_LIMIT=(int, 100_000_000),
    HYPERUNIFORM_MP_DPS=(int, 50),
    HYPERUNIFORM_SEED=(int, 0),
)

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = env('SECRET_KEY', default='django-insecure-hyperuniform-local-only')

DEBUG = env('DEBUG')

ALLOWED_HOSTS = env.list('ALLOWED_HOSTS', default=['localhost', '127.0.0.1'])


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'hyperuniform_app',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'hyperuniform.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'hyperuniform.wsgi.application'


# Database
# Run records are small; sqlite is the default, any DATABASE_URL works.

DATABASES = {
    'default': env.db('DATABASE_URL', default=f"sqlite:///{BASE_DIR / 'hyperuniform.sqlite3'}"),
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (admin only)

STATIC_URL = 'static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Configuration (serializers only, no API views)
REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': False,
    'UNICODE_JSON': False,
}

# Numerical defaults shared by the library and the management commands
HYPERUNIFORM = {
    'OUTPUT_DIR': env('HYPERUNIFORM_OUTPUT_DIR', default=str(BASE_DIR / 'output')),
    'MAX_LETTERS': env('HYPERUNIFORM_MAX_LETTERS'),
    'SIEVE_LIMIT': env('HYPERUNIFORM_SIEVE_LIMIT'),
    'MP_DPS': env('HYPERUNIFORM_MP_DPS'),
    'SEED': env('HYPERUNIFORM_SEED'),
    'KSTAR_CUT_NUMERATOR': 50.0,
    'RENORM_TOL': 1e-12,
    'RENORM_MAX_ITER': 200,
    'CONDITIONING_GAP': 1e-6,
}

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'hyperuniform_app': {
            'handlers': ['console'],
            'level': env('HYPERUNIFORM_LOG_LEVEL'),
            'propagate': False,
        },
    },
}
