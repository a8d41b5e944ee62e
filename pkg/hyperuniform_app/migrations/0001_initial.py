# Generated by Django 4.2 on 2026-10-18 09:12

from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(db_index=True, max_length=32)),
                ('system', models.CharField(blank=True, db_index=True, max_length=64)),
                ('config', models.JSONField(default=dict)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('output_format', models.CharField(choices=[('csv', 'CSV'), ('json', 'JSON')], default='csv', max_length=4)),
                ('seed', models.BigIntegerField(blank=True, null=True)),
                ('output_sha256', models.CharField(blank=True, max_length=64)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
            ],
            options={
                'verbose_name': 'Run Record',
                'verbose_name_plural': 'Run Records',
                'db_table': 'run_records',
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='ExponentRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('system', models.CharField(db_index=True, max_length=64)),
                ('model', models.CharField(default='power', max_length=16)),
                ('measured', models.FloatField()),
                ('predicted', models.FloatField(blank=True, null=True)),
                ('tolerance', models.FloatField(blank=True, null=True)),
                ('passed', models.BooleanField(null=True)),
                ('label', models.CharField(blank=True, max_length=32)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='exponents', to='hyperuniform_app.runrecord')),
            ],
            options={
                'verbose_name': 'Exponent Record',
                'verbose_name_plural': 'Exponent Records',
                'db_table': 'exponent_records',
                'ordering': ['system'],
            },
        ),
    ]
