# Generated by Django 5.2.3 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='Run',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('spectrum', 'Spectrum'), ('eigen', 'Eigen'), ('solve', 'Solve'), ('verify', 'Verify')], max_length=20)),
                ('config_hash', models.CharField(db_index=True, max_length=40)),
                ('config', models.JSONField(default=dict)),
                ('status', models.CharField(choices=[('succeeded', 'Succeeded'), ('failed', 'Failed')], default='succeeded', max_length=20)),
                ('exit_code', models.PositiveSmallIntegerField(default=0)),
                ('outputs', models.JSONField(blank=True, default=list)),
                ('message', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['command', 'config_hash'], name='runs_run_command_5c1f0e_idx')],
            },
        ),
    ]
