"""
Checks that the project is configured: settings, database tables and the
numerical stack, and the admin used to browse recorded runs.
"""
import importlib

from django.conf import settings
from django.contrib.auth import get_user_model
from django.db import connection
from django.test import SimpleTestCase, TestCase
from django.urls import reverse

from hyperuniform_app.conf import DEFAULTS, get_setting
from hyperuniform_app.models import ExponentRecord, RunRecord


class SettingsTests(SimpleTestCase):
    def test_numerical_defaults_are_configured(self):
        for name in DEFAULTS:
            self.assertIn(name, settings.HYPERUNIFORM)

    def test_override(self):
        with self.settings(HYPERUNIFORM={'MP_DPS': 80}):
            self.assertEqual(get_setting('MP_DPS'), 80)
            self.assertEqual(get_setting('SEED'), DEFAULTS['SEED'])

    def test_app_installed(self):
        self.assertIn('hyperuniform_app', settings.INSTALLED_APPS)
        self.assertIn('rest_framework', settings.INSTALLED_APPS)

    def test_numerical_stack(self):
        for module in ('numpy', 'scipy.linalg', 'scipy.integrate', 'mpmath', 'sympy'):
            with self.subTest(module=module):
                importlib.import_module(module)


class DatabaseTests(TestCase):
    def test_connection(self):
        with connection.cursor() as cursor:
            cursor.execute("SELECT 1")
            self.assertEqual(cursor.fetchone()[0], 1)

    def test_models(self):
        run = RunRecord.objects.create(command='fit', system='catalogue', config={'command': 'fit', 'options': {}})
        ExponentRecord.objects.create(run=run, system='poisson', measured=1.0, predicted=1.0, tolerance=0.01,
                                      passed=True, label='two-sided')
        self.assertEqual(str(run), f"fit catalogue (#{run.pk})")
        self.assertEqual(str(run.exponents.get()), "poisson: 1.0000")
        run.delete()
        self.assertEqual(ExponentRecord.objects.count(), 0)


class AdminTests(TestCase):
    def setUp(self):
        user = get_user_model().objects.create_superuser('admin', 'admin@example.com', 'secret')
        self.client.force_login(user)
        self.run = RunRecord.objects.create(command='fit', system='catalogue', config={'command': 'fit', 'options': {}})
        ExponentRecord.objects.create(run=self.run, system='poisson', measured=1.0, predicted=1.0, tolerance=0.01,
                                      passed=True, label='two-sided')

    def test_run_list(self):
        response = self.client.get(reverse('admin:hyperuniform_app_runrecord_changelist'))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, 'catalogue')

    def test_run_detail_shows_exponents(self):
        response = self.client.get(reverse('admin:hyperuniform_app_runrecord_change', args=[self.run.pk]))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, 'poisson')

    def test_login_required(self):
        self.client.logout()
        response = self.client.get(reverse('admin:hyperuniform_app_exponentrecord_changelist'))
        self.assertEqual(response.status_code, 302)
