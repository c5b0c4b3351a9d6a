import logging

from django.db import DatabaseError, models

from runs.choices import CommandChoices, RunStatusChoices

logger = logging.getLogger(__name__)


class Run(models.Model):
    """One invocation of a toolkit command and the files it emitted"""

    command = models.CharField(max_length=20, choices=CommandChoices.choices)
    config_hash = models.CharField(max_length=40, db_index=True)
    config = models.JSONField(default=dict)
    status = models.CharField(
        max_length=20,
        choices=RunStatusChoices.choices,
        default=RunStatusChoices.SUCCEEDED,
    )
    exit_code = models.PositiveSmallIntegerField(default=0)
    outputs = models.JSONField(default=list, blank=True)
    message = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]
        indexes = [models.Index(fields=["command", "config_hash"])]

    def __str__(self):
        return f"{self.command} {self.config_hash[:12]} - {self.get_status_display()}"

    @property
    def is_success(self):
        return self.status == RunStatusChoices.SUCCEEDED

    @property
    def short_hash(self):
        return self.config_hash[:12]

    @classmethod
    def record(cls, command, config_hash, config, exit_code=0, outputs=None, message=""):
        """Persist a run; storage problems are logged, never raised"""
        try:
            return cls.objects.create(
                command=command,
                config_hash=config_hash,
                config=config,
                status=RunStatusChoices.SUCCEEDED
                if exit_code == 0
                else RunStatusChoices.FAILED,
                exit_code=exit_code,
                outputs=[str(path) for path in outputs or []],
                message=message,
            )
        except DatabaseError as exc:
            logger.warning("could not record %s run %s: %s", command, config_hash[:12], exc)
            return None
