from runs.choices import CommandChoices, SuiteChoices
from runs.commands import PDiracCommand
from runs.pipelines import run_verify


class Command(PDiracCommand):
    help = "Run an invariant suite and write its pass/fail table"
    command = CommandChoices.VERIFY

    def add_command_arguments(self, parser):
        parser.add_argument(
            "suite", nargs="?", choices=SuiteChoices.values, default=SuiteChoices.ALL
        )

    def run(self, config, options):
        return run_verify(config, options["suite"])
