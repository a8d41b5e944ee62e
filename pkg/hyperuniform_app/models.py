"""
Database models for recorded hyperuniform runs.
"""
from django.db import models


class RunRecord(models.Model):
    """One management-command run, replayable from its config."""
    FORMAT_CHOICES = [
        ('csv', 'CSV'),
        ('json', 'JSON'),
    ]

    command = models.CharField(max_length=32, db_index=True)
    system = models.CharField(max_length=64, blank=True, db_index=True)
    config = models.JSONField(default=dict)
    output_path = models.CharField(max_length=500, blank=True)
    output_format = models.CharField(max_length=4, choices=FORMAT_CHOICES, default='csv')
    seed = models.BigIntegerField(null=True, blank=True)
    output_sha256 = models.CharField(max_length=64, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)
    updated_at = models.DateTimeField(auto_now=True)

    class Meta:
        db_table = 'run_records'
        verbose_name = 'Run Record'
        verbose_name_plural = 'Run Records'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.command} {self.system} (#{self.pk})"


class ExponentRecord(models.Model):
    """Measured against predicted scaling exponent of one system."""
    run = models.ForeignKey(
        RunRecord,
        on_delete=models.CASCADE,
        related_name='exponents',
        db_index=True
    )
    system = models.CharField(max_length=64, db_index=True)
    model = models.CharField(max_length=16, default='power')
    measured = models.FloatField()
    predicted = models.FloatField(null=True, blank=True)
    tolerance = models.FloatField(null=True, blank=True)
    passed = models.BooleanField(null=True)
    label = models.CharField(max_length=32, blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = 'exponent_records'
        verbose_name = 'Exponent Record'
        verbose_name_plural = 'Exponent Records'
        ordering = ['system']

    def __str__(self):
        return f"{self.system}: {self.measured:.4f}"
