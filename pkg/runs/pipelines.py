"""
The study pipelines behind the management commands. Each takes a validated
``RunConfig``, writes its files through a ``RunEmitter`` and returns a
``RunOutcome``; solver errors propagate to the caller.
"""

import logging
from dataclasses import dataclass, field

from critical.choices import SolverKind
from critical.diagnostics import ps_diagnostic
from critical.solvers import (
    constant_branch,
    dual_fountain_sequence,
    fountain_sequence,
    global_minimize,
    mountain_pass,
)
from eigen.solvers import ls_sequence, min_eigen, tail_sequence
from runs.choices import CommandChoices, EigenModeChoices, SuiteChoices
from runs.emitters import RunEmitter, format_mode
from runs.verification import run_suites

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = ("index", "eigenvalue", "multiplicity", "mode", "magnitude")
EIGEN_HEADER = ("index", "lambda", "residual", "iterations", "seed")
TAIL_HEADER = ("k", "tau", "tau_p")
SOLVE_HEADER = ("kind", "k", "value", "grad_residual", "nehari_defect", "iterations", "seed")
VERIFY_HEADER = ("suite", "check", "measured", "threshold", "passed")

SOLVER_FAILURE = 3
VERIFY_FAILURE = 4


@dataclass
class RunOutcome:
    files: list = field(default_factory=list)
    exit_code: int = 0
    message: str = ""

    @property
    def succeeded(self):
        return self.exit_code == 0


def run_spectrum(config):
    dirac = config.build_dirac()
    count = config.section("spectrum")["count"]
    entries = dirac.spectrum(count)
    emitter = RunEmitter(CommandChoices.SPECTRUM, config)
    emitter.write_table(
        SPECTRUM_HEADER,
        (
            (index, entry.eigenvalue, entry.multiplicity, format_mode(entry.mode), entry.magnitude)
            for index, entry in enumerate(entries, 1)
        ),
    )
    emitter.write_manifest(count=count)
    return RunOutcome(emitter.files, message=f"{len(entries)} eigenvalues of D")


def run_eigen(config):
    section = config.section("eigen")
    mode = section["mode"]
    dirac = config.build_dirac()
    eigen_config = config.eigen_config()
    emitter = RunEmitter(CommandChoices.EIGEN, config)
    outcome = RunOutcome()

    if mode == EigenModeChoices.TAIL:
        q = config.p if section["q"] is None else section["q"]
        taus = tail_sequence(dirac, config.p, q, section["kmax"], eigen_config)
        emitter.write_table(
            TAIL_HEADER, ((k, tau, tau**config.p) for k, tau in enumerate(taus))
        )
        outcome.message = f"tau_0..tau_{section['kmax']} for q={q}"
        emitter.write_manifest(eigen=eigen_config.as_dict(), mode=mode, q=q)
        outcome.files = emitter.files
        return outcome

    if mode == EigenModeChoices.SEQUENCE:
        pairs = ls_sequence(dirac, eigen_config, n=section["count"])
        if len(pairs) < section["count"]:
            outcome.exit_code = SOLVER_FAILURE
            outcome.message = f"only {len(pairs)} of {section['count']} eigenpairs converged"
    else:
        pairs = [min_eigen(dirac, eigen_config)]
    emitter.write_table(
        EIGEN_HEADER,
        ({"index": index, **pair.as_row()} for index, pair in enumerate(pairs, 1)),
    )
    if pairs:
        emitter.write_trace([entry for pair in pairs for entry in pair.trace])
    emitter.write_manifest(eigen=eigen_config.as_dict(), mode=mode)
    outcome.files = emitter.files
    if outcome.succeeded:
        outcome.message = f"lambda_1 = {pairs[0].eigenvalue!r}"
    return outcome


def _solve_points(energy, config, section):
    """(points, manifest extras, shortfall message) for the configured solver"""
    solver = section["solver"]
    solve_config = config.solve_config()
    if solver == SolverKind.MOUNTAIN_PASS:
        direction = constant_branch(energy).field if section["seed_branch"] else None
        return [mountain_pass(energy, solve_config, direction)], {}, ""
    if solver == SolverKind.MINIMIZE:
        point = global_minimize(energy, solve_config, seed_branch=section["seed_branch"])
        return [point], {}, ""

    sequence = fountain_sequence if solver == SolverKind.FOUNTAIN else dual_fountain_sequence
    sweep = sequence(energy, solve_config, section["kmax"], section["estimate_tails"])
    extras = {
        "trend_holds": sweep.trend_holds,
        "level_values": sweep.level_values,
        "levels_tried": len(sweep.levels) + len(sweep.failures),
        "failures": [{"level": item.level, "message": item.message} for item in sweep.failures],
        "tail_estimates": sweep.tail_estimates,
    }
    shortfall = ""
    if len(sweep) < section["kmax"]:
        shortfall = f"only {len(sweep)} of {section['kmax']} distinct critical values found"
    elif not sweep.trend_holds:
        shortfall = f"level values {sweep.level_values!r} break the {solver} trend"
    return sweep.points, extras, shortfall


def run_solve(config):
    section = config.section("solve")
    energy = config.build_energy()
    emitter = RunEmitter(CommandChoices.SOLVE, config)
    points, extras, shortfall = _solve_points(energy, config, section)

    emitter.write_table(SOLVE_HEADER, (point.as_row() for point in points))
    traced = [point for point in points if point.trace]
    if traced:
        emitter.write_trace([entry for point in traced for entry in point.trace])
    if section["dump_fields"]:
        for index, point in enumerate(points, 1):
            emitter.write_field(point.field, index)
    emitter.write_manifest(
        solver=section["solver"],
        solve=config.solve_config().as_dict(),
        nonlinearity=energy.nl.as_dict(),
        classification=energy.classification.as_dict(),
        diagnostics=[ps_diagnostic(energy, point.trace).as_dict() for point in traced],
        **extras,
    )
    outcome = RunOutcome(emitter.files)
    if shortfall:
        outcome.exit_code = SOLVER_FAILURE
        outcome.message = shortfall
    else:
        outcome.message = ", ".join(f"{point.label}={point.value!r}" for point in points)
    return outcome


def run_verify(config, suite=SuiteChoices.ALL):
    checks = run_suites(config, suite)
    emitter = RunEmitter(CommandChoices.VERIFY, config)
    suffix = "" if suite == SuiteChoices.ALL else str(suite)
    emitter.write_table(VERIFY_HEADER, (check.as_row() for check in checks), suffix)
    failed = [check for check in checks if not check.passed]
    emitter.write_manifest(
        suffix,
        suite=str(suite),
        passed=len(checks) - len(failed),
        failed=[check.name for check in failed],
    )
    if failed:
        return RunOutcome(
            emitter.files,
            VERIFY_FAILURE,
            f"{len(failed)} of {len(checks)} checks failed: "
            + ", ".join(check.name for check in failed),
        )
    return RunOutcome(emitter.files, message=f"all {len(checks)} checks passed")
