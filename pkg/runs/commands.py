"""
Shared plumbing of the toolkit management commands: config loading with
flag overrides, error reporting and the run ledger.

Errors are written to stderr as one JSON object and raised as
``CommandError`` with exit code 2 (configuration), 3 (solver) or
4 (verification).
"""

import json
import logging

from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from runs.emitters import RunEmitter
from runs.models import Run
from runs.serializers import load_config
from shared.exceptions import ConfigurationError, SolverError

logger = logging.getLogger(__name__)

CONFIG_ERROR = 2
SOLVER_ERROR = 3


class PDiracCommand(BaseCommand):
    command = None

    def add_arguments(self, parser):
        parser.add_argument("--config", dest="config_path", help="Run config JSON or a run manifest")
        parser.add_argument("--seed", type=int, help="Base seed for every random start")
        parser.add_argument("--out", dest="output_dir", help="Output directory")
        parser.add_argument(
            "--override-p-range",
            action="store_true",
            help="Allow p >= m",
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def overrides(self, options):
        """Nested config entries set by this command's own flags"""
        return {}

    def run(self, config, options):
        raise NotImplementedError

    def fail(self, kind, message, exit_code, detail=None):
        payload = {"error": kind, "message": message, "detail": detail}
        self.stderr.write(json.dumps(payload, sort_keys=True), style_func=lambda text: text)
        raise CommandError(message, returncode=exit_code)

    def load(self, options):
        common = {
            "seed": options.get("seed"),
            "output_dir": options.get("output_dir"),
            "override_p_range": True if options.get("override_p_range") else None,
        }
        try:
            return load_config(options.get("config_path"), {**common, **self.overrides(options)})
        except serializers.ValidationError as exc:
            self.fail("validation", "invalid run config", CONFIG_ERROR, exc.detail)
        except ConfigurationError as exc:
            self.fail("configuration", str(exc), CONFIG_ERROR)

    def record(self, config, exit_code, files, message):
        return Run.record(
            self.command,
            config.config_hash,
            config.to_dict(),
            exit_code=exit_code,
            outputs=files,
            message=message,
        )

    def handle(self, *args, **options):
        config = self.load(options)
        self.stdout.write(f"Running {self.command} for config {config.short_hash}...")
        try:
            outcome = self.run(config, options)
        except SolverError as exc:
            emitter = RunEmitter(self.command, config)
            files = [emitter.write_trace(exc.trace)] if exc.trace else []
            self.record(config, SOLVER_ERROR, files, str(exc))
            self.fail(
                "solver",
                str(exc),
                SOLVER_ERROR,
                {"type": type(exc).__name__, "trace": [str(path) for path in files]},
            )
        except ConfigurationError as exc:
            self.record(config, CONFIG_ERROR, [], str(exc))
            self.fail("configuration", str(exc), CONFIG_ERROR, {"type": type(exc).__name__})

        self.record(config, outcome.exit_code, outcome.files, outcome.message)
        for path in outcome.files:
            self.stdout.write(f"  {path}")
        if not outcome.succeeded:
            self.stdout.write(self.style.WARNING(outcome.message))
            kind = "verification" if self.command == "verify" else "solver"
            self.fail(
                kind,
                outcome.message,
                outcome.exit_code,
                {"files": [str(path) for path in outcome.files]},
            )
        self.stdout.write(self.style.SUCCESS(f"✓ {self.command}: {outcome.message}"))
