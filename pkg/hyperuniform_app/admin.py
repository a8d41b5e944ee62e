"""
Admin configuration for recorded runs.
"""
from django.contrib import admin

from .models import ExponentRecord, RunRecord


class ExponentRecordInline(admin.TabularInline):
    model = ExponentRecord
    extra = 0
    readonly_fields = ['system', 'model', 'measured', 'predicted', 'tolerance', 'passed', 'label']


@admin.register(RunRecord)
class RunRecordAdmin(admin.ModelAdmin):
    """Admin interface for RunRecord model."""
    list_display = ['id', 'command', 'system', 'output_format', 'seed', 'created_at']
    list_filter = ['command', 'output_format', 'created_at']
    search_fields = ['system', 'output_path']
    readonly_fields = ['created_at', 'updated_at', 'config', 'output_sha256']
    inlines = [ExponentRecordInline]


@admin.register(ExponentRecord)
class ExponentRecordAdmin(admin.ModelAdmin):
    """Admin interface for ExponentRecord model."""
    list_display = ['system', 'model', 'measured', 'predicted', 'passed', 'label']
    list_filter = ['model', 'passed', 'label']
    search_fields = ['system']
