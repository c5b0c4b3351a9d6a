from django.core.management.base import BaseCommand

from runs.choices import CommandChoices
from runs.models import Run


class Command(BaseCommand):
    help = "List recorded runs, newest first"

    def add_arguments(self, parser):
        parser.add_argument("--command", dest="run_command", choices=CommandChoices.values)
        parser.add_argument("--hash", dest="config_hash", help="Config hash or a prefix of it")
        parser.add_argument("--limit", type=int, default=20)

    def handle(self, *args, **options):
        runs = Run.objects.all()
        if options["run_command"]:
            runs = runs.filter(command=options["run_command"])
        if options["config_hash"]:
            runs = runs.filter(config_hash__startswith=options["config_hash"])
        total = runs.count()
        runs = list(runs[: options["limit"]])

        if not runs:
            self.stdout.write(self.style.WARNING("No recorded runs match."))
            return

        self.stdout.write("=" * 50)
        self.stdout.write(f"RUNS ({len(runs)} of {total}):")
        self.stdout.write("=" * 50)
        for run in runs:
            style = self.style.SUCCESS if run.is_success else self.style.ERROR
            self.stdout.write(
                style(
                    f"{run.created_at:%Y-%m-%d %H:%M:%S} {run.command:<8} "
                    f"{run.short_hash} exit={run.exit_code} files={len(run.outputs)}"
                )
            )
            if run.message:
                self.stdout.write(f"    {run.message}")
