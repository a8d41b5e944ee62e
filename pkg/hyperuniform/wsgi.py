"""
WSGI config for hyperuniform project (admin browsing of recorded runs).
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hyperuniform.settings')

application = get_wsgi_application()
