import logging
from datetime import timedelta

import pytest
from django.contrib import admin
from django.db import DatabaseError
from django.utils import timezone

from runs.admin import RunAdmin
from runs.choices import CommandChoices, RunStatusChoices
from runs.models import Run
from tests.factories import FailedRunFactory, RunFactory


@pytest.mark.django_db
class TestRunModel:
    """Test the run ledger"""

    def test_record_success(self):
        """Test a successful run is stored with its outputs"""
        run = Run.record("spectrum", "a" * 40, {"p": 2.0}, outputs=["output/x.csv"])
        assert run.status == RunStatusChoices.SUCCEEDED
        assert run.is_success
        assert run.outputs == ["output/x.csv"]
        assert run.short_hash == "a" * 12

    def test_record_failure(self):
        """Test that a nonzero exit code marks the run failed"""
        run = Run.record("eigen", "b" * 40, {}, exit_code=3, message="no restart converged")
        assert run.status == RunStatusChoices.FAILED
        assert not run.is_success
        assert str(run) == f"eigen {'b' * 12} - Failed"

    def test_record_survives_database_errors(self, monkeypatch, caplog):
        """Test that storage problems are logged, not raised"""

        def broken(**kwargs):
            raise DatabaseError("disk I/O error")

        monkeypatch.setattr(Run.objects, "create", broken)
        with caplog.at_level(logging.WARNING, logger="runs"):
            assert Run.record("verify", "c" * 40, {}) is None
        assert "could not record verify run" in caplog.text

    def test_ordering(self):
        """Test newest runs first"""
        first = RunFactory()
        second = FailedRunFactory()
        Run.objects.filter(pk=first.pk).update(created_at=timezone.now() - timedelta(hours=1))
        assert list(Run.objects.all()) == [second, first]


@pytest.mark.django_db
class TestRunAdmin:
    """Test the run admin interface"""

    def test_registered(self):
        """Test that RunAdmin is registered"""
        assert admin.site.is_registered(Run)
        assert isinstance(admin.site._registry[Run], RunAdmin)

    def test_status_badge(self):
        """Test the colored status badge"""
        admin_instance = RunAdmin(Run, admin.site)

        badge_html = admin_instance.status_badge(RunFactory())
        assert "green" in badge_html
        assert "Succeeded" in badge_html

        badge_html = admin_instance.status_badge(FailedRunFactory())
        assert "red" in badge_html
        assert "Failed" in badge_html

    def test_display_helpers(self):
        """Test the hash and file count columns"""
        admin_instance = RunAdmin(Run, admin.site)
        run = RunFactory(command=CommandChoices.SOLVE, outputs=["a.csv", "a.json"])
        assert admin_instance.short_hash(run) == run.config_hash[:12]
        assert admin_instance.outputs_count(run) == 2
