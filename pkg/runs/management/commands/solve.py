from critical.choices import SolverKind
from runs.choices import CommandChoices
from runs.commands import PDiracCommand
from runs.pipelines import run_solve


class Command(PDiracCommand):
    help = "Find critical points of the energy functional"
    command = CommandChoices.SOLVE

    def add_command_arguments(self, parser):
        parser.add_argument("--solver", choices=SolverKind.values)
        parser.add_argument(
            "--seed-branch",
            action="store_true",
            help="Start mountain pass or minimization at the constant branch",
        )
        parser.add_argument("--kmax", type=int, help="Number of fountain levels")
        parser.add_argument(
            "--dump-fields",
            action="store_true",
            help="Write every accepted field in the lattice binary format",
        )

    def overrides(self, options):
        return {
            "solve": {
                "solver": options.get("solver"),
                "kmax": options.get("kmax"),
                "seed_branch": True if options.get("seed_branch") else None,
                "dump_fields": True if options.get("dump_fields") else None,
            }
        }

    def run(self, config, options):
        return run_solve(config)
