"""
Invariant suites run by ``manage.py verify``. Each check reports a measured
quantity, the threshold it is held to and whether it passed.
"""

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from clifford.gamma import build_gamma, check_relations
from critical.solvers import constant_branch, global_minimize, mountain_pass
from dirac.operator import DiracOperator
from eigen.solvers import min_eigen, monotone_inequality_check
from energy.functional import Energy
from lattice.fields import dot_values, lp_norm, lp_norm_values, random_field
from runs.choices import SuiteChoices
from shared.exceptions import PDiracError

logger = logging.getLogger(__name__)

CLIFFORD_DIMENSIONS = range(2, 7)
SYMBOL_SAMPLES = 100
LICHNEROWICZ_FIELDS = 20
ADJOINT_PAIRS = 100
HOMOGENEITY_FIELDS = 100
NORM_FIELDS = 1000
STABILITY_GRIDS = (8, 16)
GRADIENT_SAMPLES = 20
GROWTH_SCALES = (1e-3, 1e-1, 1.0, 10.0, 1e3)
MONOTONE_PAIRS = 1000
MONOTONE_EXPONENTS = (1.5, 2.0, 3.0)
GRADIENT_CASES = ((2.0, 0.0, 1e-6), (1.5, 1e-6, 1e-4), (3.0, 1e-6, 1e-4))


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    threshold: float
    passed: bool

    def as_row(self):
        return {
            "suite": self.suite,
            "check": self.name,
            "measured": self.measured,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _at_most(suite, name, measured, threshold):
    measured = float(measured)
    return Check(suite, name, measured, threshold, bool(measured <= threshold))


def _at_least(suite, name, measured, threshold):
    measured = float(measured)
    return Check(suite, name, measured, threshold, bool(measured >= threshold))


def _relative(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def clifford_suite(config):
    suite = SuiteChoices.CLIFFORD
    rng = np.random.default_rng(config.seed)
    checks = []
    for m in CLIFFORD_DIMENSIONS:
        gamma = build_gamma(m)
        checks.append(_at_most(suite, f"relations m={m}", check_relations(gamma), 1e-14))
        square, spectrum = 0.0, 0.0
        half = gamma.spinor_dim // 2
        expected = np.array([-1.0] * half + [1.0] * half)
        identity = np.eye(gamma.spinor_dim)
        for _ in range(SYMBOL_SAMPLES):
            xi = rng.standard_normal(m)
            xi /= np.linalg.norm(xi)
            symbol = gamma.symbol(xi)
            square = max(square, float(np.max(np.abs(symbol @ symbol - identity))))
            eigenvalues = np.linalg.eigvalsh(symbol)
            spectrum = max(spectrum, float(np.max(np.abs(eigenvalues - expected))))
        checks.append(_at_most(suite, f"symbol square m={m}", square, 1e-13))
        checks.append(_at_most(suite, f"symbol spectrum m={m}", spectrum, 1e-13))
    return checks


def _min_ratio(dirac, p, seed, count):
    model, gamma = dirac.model, dirac.gamma
    return min(
        dirac.norm_equivalence_ratio(random_field(model, gamma, seed + index), p)
        for index in range(count)
    )


def norms_suite(config):
    """Operator identities and norm inequalities on the configured model"""
    suite = SuiteChoices.NORMS
    dirac = config.build_dirac()
    model, gamma = dirac.model, dirac.gamma
    p = config.p
    lichnerowicz = 0.0
    for index in range(LICHNEROWICZ_FIELDS):
        values = random_field(model, gamma, config.seed + index).values
        laplacian = dirac.laplacian_values(values)
        defect = np.max(np.abs(dirac.dirac_values(dirac.dirac_values(values)) - laplacian))
        lichnerowicz = max(lichnerowicz, float(defect / max(1.0, np.max(np.abs(laplacian)))))
    adjoint, holder = 0.0, 0.0
    for index in range(ADJOINT_PAIRS):
        f = random_field(model, gamma, config.seed + 2 * index).values
        g = random_field(model, gamma, config.seed + 2 * index + 1).values
        df, dg = dirac.dirac_values(f), dirac.dirac_values(g)
        defect = abs(model.cell_volume * (np.vdot(g, df) - np.vdot(dg, f)))
        scale = math.sqrt(abs(dot_values(model, df, df) * dot_values(model, g, g)))
        adjoint = max(adjoint, defect / max(1.0, scale))
        bound = lp_norm_values(model, f, p) * lp_norm_values(model, g, p / (p - 1.0))
        holder = max(holder, abs(model.cell_volume * np.vdot(f, g)) / bound)
    rng = np.random.default_rng(config.seed)
    homogeneity = 0.0
    for index in range(HOMOGENEITY_FIELDS):
        f = random_field(model, gamma, config.seed + index)
        c = complex(*rng.standard_normal(2))
        expected = abs(c) * lp_norm(f, p)
        homogeneity = max(homogeneity, _relative(lp_norm(f * c, p), expected))
    ratios = [
        dirac.norm_equivalence_ratio(random_field(model, gamma, config.seed + index), p)
        for index in range(NORM_FIELDS)
    ]
    coarse, fine = (
        _min_ratio(
            DiracOperator(replace(model, grid=(n,) * model.m), gamma),
            p,
            config.seed,
            NORM_FIELDS,
        )
        for n in STABILITY_GRIDS
    )
    return [
        _at_most(suite, "lichnerowicz", lichnerowicz, 1e-12),
        _at_most(suite, "self-adjoint", adjoint, 1e-12),
        _at_most(suite, "holder", holder, 1.0 + 1e-12),
        _at_most(suite, "homogeneity", homogeneity, 1e-12),
        Check(suite, "norm equivalence lower", min(ratios), 0.0, bool(min(ratios) > 0.0)),
        _at_most(suite, "norm equivalence upper", max(ratios), float(model.m)),
        _at_most(suite, "norm equivalence grid drift", _relative(fine, coarse), 0.2),
    ]


def _gradient_error(energy, seed, h=1e-5):
    model, gamma = energy.model, energy.dirac.gamma
    f = random_field(model, gamma, seed).normalized()
    xi = random_field(model, gamma, seed + 1).normalized()
    _, gradient = energy.evaluate(f.values)
    directional = dot_values(model, gradient, xi.values)
    difference = (energy.value(f + xi * h) - energy.value(f - xi * h)) / (2.0 * h)
    return abs(difference - directional) / max(abs(directional), 1.0)


def gradient_suite(config):
    """Directional derivatives of L against centered differences, and the growth of H"""
    suite = SuiteChoices.GRADIENT
    dirac = config.build_dirac()
    model, gamma = dirac.model, dirac.gamma
    nl = config.build_nonlinearity()
    checks = []
    for p, eps, threshold in GRADIENT_CASES:
        energy = Energy(dirac, p, nl, eps, override_p_range=True)
        error = max(
            _gradient_error(energy, config.seed + 2 * index)
            for index in range(GRADIENT_SAMPLES)
        )
        checks.append(_at_most(suite, f"gradient p={p}", error, threshold))
    constant = nl.growth_constant(model.volume)
    growth = 0.0
    for index, scale in enumerate(GROWTH_SCALES):
        f = random_field(model, gamma, config.seed + index) * scale
        bound = constant * (1.0 + lp_norm(f, nl.e) ** nl.e)
        if bound > 0:
            growth = max(growth, abs(nl.hcal(f)) / bound)
    checks.append(_at_most(suite, "growth", growth, 1.0))
    return checks


def monotone_suite(config):
    """Monotonicity of the p-Dirac operator with slack -1e-10"""
    suite = SuiteChoices.MONOTONE
    dirac = config.build_dirac()
    model, gamma = dirac.model, dirac.gamma
    rng = np.random.default_rng(config.seed)
    zero = np.zeros(dirac.field_shape, dtype=np.complex128)
    checks = []
    for p in MONOTONE_EXPONENTS:
        slack, equality = math.inf, 0.0
        for index in range(MONOTONE_PAIRS):
            scales = 10.0 ** rng.uniform(-1.0, 1.0, size=2)
            f = random_field(model, gamma, config.seed + 2 * index) * scales[0]
            g = random_field(model, gamma, config.seed + 2 * index + 1) * scales[1]
            check = monotone_inequality_check(dirac, p, f, g)
            slack = min(slack, (check.lhs - check.rhs) / max(1.0, abs(check.rhs)))
            if index < 10:
                for other in (f, f.with_values(zero)):
                    case = monotone_inequality_check(dirac, p, f, other)
                    equality = max(
                        equality, abs(case.lhs - case.rhs) / max(1.0, abs(case.rhs))
                    )
        checks.append(_at_least(suite, f"monotone p={p}", slack, -1e-10))
        checks.append(_at_most(suite, f"monotone equality p={p}", equality, 1e-10))
    return checks


def oracle_suite(config):
    """Closed-form values: the lowest Dirac eigenvalue and the single-mode branch"""
    suite = SuiteChoices.ORACLE
    dirac = config.build_dirac()
    model = dirac.model
    checks = []
    lowest = 2.0 * math.pi * math.sqrt(
        math.fsum((delta / length) ** 2 for delta, length in zip(model.twist, model.lengths))
    )
    if dirac.is_singular:
        logger.warning("oracle suite skips the spectral checks on a singular model")
    else:
        magnitude = dirac.spectrum(1)[0].magnitude
        checks.append(_at_most(suite, "first magnitude", _relative(magnitude, lowest), 1e-12))
        pair = min_eigen(dirac, config.eigen_config().replace(p=2.0, eps=None))
        checks.append(
            _at_most(suite, "first eigenvalue p=2", _relative(pair.eigenvalue, lowest**2), 1e-8)
        )

    energy = config.build_energy(dirac)
    classification = energy.classification
    if energy.nl.is_zero or energy.nl.e == energy.p or dirac.is_singular:
        return checks
    try:
        branch = constant_branch(energy)
        checks.append(_at_most(suite, "branch residual", branch.grad_residual, 1e-8))
        checks.append(_at_most(suite, "branch nehari", branch.nehari_defect, 1e-6))
        if classification.superlinear:
            point = mountain_pass(energy, config.solve_config(), branch.field)
            checks.append(
                _at_most(suite, "mountain pass at branch", _relative(point.value, branch.value), 1e-6)
            )
        elif classification.hi:
            point = global_minimize(energy, config.solve_config(), seed_branch=True)
            checks.append(
                _at_most(suite, "minimizer below branch", point.value - branch.value, 1e-8)
            )
    except PDiracError as exc:
        logger.warning("oracle check failed: %s", exc)
        checks.append(Check(suite, "branch solver", math.nan, 0.0, False))
    return checks


SUITES = {
    SuiteChoices.CLIFFORD: clifford_suite,
    SuiteChoices.NORMS: norms_suite,
    SuiteChoices.GRADIENT: gradient_suite,
    SuiteChoices.MONOTONE: monotone_suite,
    SuiteChoices.ORACLE: oracle_suite,
}


def run_suites(config, suite=SuiteChoices.ALL):
    names = list(SUITES) if suite == SuiteChoices.ALL else [SuiteChoices(suite)]
    checks = []
    for name in names:
        found = SUITES[name](config)
        failed = [check.name for check in found if not check.passed]
        if failed:
            logger.warning("%s suite failed: %s", name, ", ".join(failed))
        else:
            logger.info("%s suite passed %d checks", name, len(found))
        checks.extend(found)
    return checks
