from runs.choices import CommandChoices
from runs.commands import PDiracCommand
from runs.pipelines import run_spectrum


class Command(PDiracCommand):
    help = "Write the smallest-magnitude eigenvalues of the Dirac operator"
    command = CommandChoices.SPECTRUM

    def add_command_arguments(self, parser):
        parser.add_argument("--count", type=int, help="Number of eigenvalues")

    def overrides(self, options):
        return {"spectrum": {"count": options.get("count")}}

    def run(self, config, options):
        return run_spectrum(config)
