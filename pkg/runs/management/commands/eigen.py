from runs.choices import CommandChoices, EigenModeChoices
from runs.commands import PDiracCommand
from runs.pipelines import run_eigen


class Command(PDiracCommand):
    help = "Solve the p-Dirac eigenvalue problem (first pair, sequence or tail constants)"
    command = CommandChoices.EIGEN

    def add_command_arguments(self, parser):
        parser.add_argument("--mode", choices=EigenModeChoices.values)
        parser.add_argument("--count", type=int, help="Length of the eigenvalue sequence")
        parser.add_argument("--q", type=float, help="Exponent of the tail embedding")
        parser.add_argument("--kmax", type=int, help="Last tail index")

    def overrides(self, options):
        return {
            "eigen": {
                "mode": options.get("mode"),
                "count": options.get("count"),
                "q": options.get("q"),
                "kmax": options.get("kmax"),
            }
        }

    def run(self, config, options):
        return run_eigen(config)
