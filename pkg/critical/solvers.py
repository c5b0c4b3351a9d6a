"""
Critical points of the energy L.

mountain_pass descends J(v) = max_t L(t v) over L2-normalized directions:
each evaluation discretizes the segment from 0 to the negative-energy end
e = T v into path_points nodes, takes the highest node and refines it to the
ray maximum, so every iterate is the top of a path from 0 to e. global_minimize
and the dual fountain descend L itself. H_k is spanned by the 2k lowest
Fourier-Dirac eigenfields; the fountain sweeps run these solvers on the
tails Z_k of H_{k-1} inside the Galerkin space H_K, K = galerkin_k.

A single Fourier mode times any spinor has constant |psi| and |D psi|, so
the power equation reduces to the scalar relation s^p A^(p-2) = c A^(e-2);
branch_point builds these exact solutions.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from critical.choices import CriticalKind
from critical.config import SolveConfig
from dirac.galerkin import SubspaceProjector
from eigen.config import EigenConfig
from eigen.solvers import tail_embedding_constant
from lattice.fields import (
    SpinorField,
    dot_values,
    fiber_length,
    integrate,
    lp_norm_values,
    probe_values,
    random_field,
)
from shared.descent import Evaluation, descend
from shared.exceptions import (
    ClassificationError,
    ConfigurationError,
    ConvergenceError,
    FindEError,
    SolverError,
)
from shared.types import TraceEntry

logger = logging.getLogger(__name__)

NEHARI_TOLERANCE = 1e-6
DISTINCT_TOLERANCE = 1e-8
MAX_HALVINGS = 200


@dataclass(frozen=True, eq=False)
class CriticalPoint:
    field: SpinorField
    value: float
    grad_residual: float
    kind: str
    nehari_defect: float = 0.0
    iterations: int = 0
    seed: Optional[int] = None
    k: Optional[int] = None
    level: Optional[int] = None
    radius: Optional[float] = None
    rim: Optional[float] = None
    trace: list = field(default_factory=list)

    @property
    def label(self):
        return f"{self.kind}({self.k})" if self.k is not None else str(self.kind)

    def as_row(self):
        return {
            "kind": str(self.kind),
            "k": "" if self.k is None else self.k,
            "value": self.value,
            "grad_residual": self.grad_residual,
            "nehari_defect": self.nehari_defect,
            "iterations": self.iterations,
            "seed": "" if self.seed is None else self.seed,
        }


@dataclass(frozen=True)
class LevelFailure:
    level: int
    message: str


@dataclass(frozen=True, eq=False)
class Sweep:
    """
    Reported points of a fountain-type sweep, k = 1, 2, ..., plus every
    accepted level in level order.
    """

    kind: str
    points: list
    levels: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    tail_estimates: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def values(self):
        return [point.value for point in self.points]

    @property
    def level_values(self):
        return [point.value for point in self.levels]

    @property
    def nondecreasing(self):
        values = self.level_values
        return all(
            b >= a - DISTINCT_TOLERANCE * max(1.0, abs(a))
            for a, b in zip(values, values[1:])
        )

    @property
    def increasing_steps(self):
        return sum(
            b > a + DISTINCT_TOLERANCE * max(1.0, abs(a))
            for a, b in zip(self.values, self.values[1:])
        )

    @property
    def trend_holds(self):
        """Level values nondecreasing; signs and the strict steps follow the kind"""
        if not self.points:
            return False
        if self.kind == CriticalKind.DUAL_FOUNTAIN:
            return self.nondecreasing and all(value < 0 for value in self.level_values)
        return (
            self.nondecreasing
            and all(value > 0 for value in self.level_values)
            and self.increasing_steps >= len(self.points) // 2
        )


# Preconditions and small helpers


def _require(energy, flags, solver):
    classification = energy.classification
    missing = [flag for flag in flags if not getattr(classification, flag.lower())]
    if missing:
        raise ClassificationError(
            f"{solver} needs {', '.join(missing)}; e={energy.nl.e}, p={energy.p} "
            f"is {classification.regime}"
        )


def _project(projector, values):
    return values if projector is None else projector(values)


def _values_of(energy, direction):
    if isinstance(direction, SpinorField):
        return energy.dirac.check(direction)
    values = np.asarray(direction, dtype=np.complex128)
    if values.shape != energy.dirac.field_shape:
        raise ConfigurationError(
            f"direction must have shape {energy.dirac.field_shape}, got {values.shape}"
        )
    return values


def _momentum(model, mode):
    return np.array(
        [
            2.0 * math.pi * (k + delta) / length
            for k, delta, length in zip(mode, model.twist, model.lengths)
        ]
    )


def _descent_scale(energy, values):
    """Preconditioned step scale: 1 for p = 2, averaged |Dw|^(p-2) otherwise"""
    length = fiber_length(energy.dirac.dirac_values(values))
    top = integrate(energy.model, length**energy.p)
    if top <= 0 or energy.p == 2:
        return 1.0
    return integrate(energy.model, length**2) / top / max(1.0, energy.p - 1.0)


# Rim, ray ends and ray extrema


def rim_estimate(energy, r, samples=32, seed=0, projector=None):
    """min of L over samples random fields scaled to ||D psi||_p = r"""
    if samples < 32:
        raise ConfigurationError(f"samples must be >= 32, got {samples}")
    if not r >= 0:
        raise ConfigurationError(f"r must be >= 0, got {r}")
    if r == 0:
        return 0.0
    best = math.inf
    for index in range(samples):
        values = random_field(energy.model, energy.dirac.gamma, seed + index).values
        ray = energy.ray(_project(projector, values))
        if ray.sobolev == 0:
            continue
        best = min(best, ray.value(r / ray.sobolev))
    return best


def certify_rim(energy, config, projector=None, seed=0):
    """(r, rho) with rho = rim_estimate(r) > 0, halving r from the configured radius"""
    r = config.rim_radius or 1.0
    for _ in range(MAX_HALVINGS):
        rho = rim_estimate(energy, r, config.rim_samples, seed, projector)
        if rho > 0:
            return r, rho
        r *= 0.5
    raise SolverError("no radius with a positive rim estimate was found")


def _ray_end(energy, ray, r, max_doublings):
    if ray.sobolev == 0:
        raise ConfigurationError("the direction has no kinetic energy")
    t = r / ray.sobolev
    trace = []
    for doubling in range(max_doublings + 1):
        value = ray.value(t)
        trace.append(
            TraceEntry(doubling, value, math.nan, t * ray.sobolev, t)
        )
        if t * ray.sobolev > r and value <= 0:
            return t
        t *= 2.0
    raise FindEError(
        f"L(t v) stayed positive after {max_doublings} doublings", trace=trace
    )


def find_e(energy, direction, r, max_doublings=60):
    """t0 * direction with L <= 0 and ||D(t0 direction)||_p > r, by doubling t"""
    _require(energy, ("H2",), "find_e")
    values = _values_of(energy, direction)
    if not np.any(values):
        raise ConfigurationError("direction must be nonzero")
    t = _ray_end(energy, energy.ray(values), r, max_doublings)
    return SpinorField(energy.model, t * values)


def _ray_peak(ray, t_end, points):
    ts = np.linspace(0.0, t_end, points)
    index = int(np.argmax([ray.value(t) for t in ts]))
    lo = ts[index - 1] if index > 1 else 0.5 * ts[1]
    hi = ts[min(max(index, 1) + 1, points - 1)]
    if ray.slope(lo) > 0 > ray.slope(hi):
        return brentq(ray.slope, lo, hi, xtol=1e-15 * hi)
    result = minimize_scalar(
        lambda t: -ray.value(t),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * hi},
    )
    return float(result.x)


def _ray_trough(ray, max_doublings):
    """argmin of L(t v) over t > 0, or 0 if L grows from the origin"""
    if ray.sobolev == 0:
        raise ConfigurationError("the direction has no kinetic energy")
    hi = 1.0 / ray.sobolev
    for _ in range(max_doublings):
        if ray.slope(hi) > 0:
            break
        hi *= 2.0
    else:
        raise FindEError(f"L(t v) kept decreasing over {max_doublings} doublings")
    lo = hi
    for _ in range(MAX_HALVINGS):
        lo *= 0.5
        if ray.slope(lo) < 0:
            return brentq(ray.slope, lo, hi, xtol=1e-15 * hi)
    return 0.0


# Descent problems


class _RayMaxima:
    """J(v) = max_t L(t v) on the unit L2 sphere; the payload is the maximizing t"""

    def __init__(self, energy, config, projector, r):
        self.energy = energy
        self.config = config
        self.projector = projector
        self.r = r

    def normalize(self, values):
        return values / lp_norm_values(self.energy.model, values, 2)

    def precondition(self, values):
        return _project(self.projector, self.energy.dirac.precondition(values))

    def dot(self, a, b):
        return dot_values(self.energy.model, a, b)

    def evaluate(self, v):
        ray = self.energy.ray(v)
        t_end = _ray_end(self.energy, ray, self.r, self.config.max_doublings)
        t = _ray_peak(ray, t_end, self.config.path_points)
        value, gradient = self.energy.evaluate(t * v)
        gradient = _project(self.projector, gradient)
        return Evaluation(value, t * gradient, self.energy.residual_of(gradient), t)

    def norm(self, v, evaluation):
        dv = self.energy.dirac.dirac_values(v)
        return evaluation.payload * lp_norm_values(self.energy.model, dv, self.energy.p)

    def initial_scale(self, v, evaluation):
        t = evaluation.payload
        return _descent_scale(self.energy, t * v) / t**2


class _EnergyDescent:
    def __init__(self, energy, projector):
        self.energy = energy
        self.projector = projector

    def precondition(self, values):
        return _project(self.projector, self.energy.dirac.precondition(values))

    def dot(self, a, b):
        return dot_values(self.energy.model, a, b)

    def evaluate(self, values):
        value, gradient = self.energy.evaluate(values)
        gradient = _project(self.projector, gradient)
        return Evaluation(value, gradient, self.energy.residual_of(gradient))

    def norm(self, values, evaluation):
        dv = self.energy.dirac.dirac_values(values)
        return lp_norm_values(self.energy.model, dv, self.energy.p)


def _accept(energy, values, result, kind, seed, **extra):
    f = SpinorField(energy.model, values)
    defect = energy.nehari_defect(f)
    if not result.converged or defect > NEHARI_TOLERANCE:
        raise ConvergenceError(
            f"{kind} stopped on {result.reason}: residual {result.residual!r}, "
            f"nehari defect {defect!r}",
            trace=result.trace,
        )
    return CriticalPoint(
        field=f,
        value=energy.value_of(values),
        grad_residual=result.residual,
        kind=kind,
        nehari_defect=defect,
        iterations=result.iterations,
        seed=seed,
        trace=result.trace,
        **extra,
    )


def _minimize_from(energy, config, start, projector=None, restart=0):
    problem = _EnergyDescent(energy, projector)
    return descend(
        problem.evaluate,
        start,
        dot=problem.dot,
        precondition=problem.precondition,
        tol=config.tol,
        max_iter=config.max_iter,
        step_rule=config.step_rule,
        memory=config.memory,
        norm=problem.norm,
        initial_scale=_descent_scale(energy, start),
        restart=restart,
        stall_rounds=config.stall_rounds,
    )


# Solvers


def mountain_pass(
    energy,
    config=None,
    direction=None,
    projector=None,
    kind=CriticalKind.MOUNTAIN_PASS,
    seed=None,
    **extra,
):
    """
    Mountain-pass critical point: the lowest ray maximum, found by descending
    J(v) = max_t L(t v). Starts from ``direction`` or a seeded random field,
    restricted to the range of ``projector`` when given.
    """
    config = config or SolveConfig()
    _require(energy, ("H1", "H2", "H3"), "mountain_pass")
    seed = config.seed if seed is None else seed
    r, rho = certify_rim(energy, config, projector, seed)
    if direction is None:
        start = random_field(energy.model, energy.dirac.gamma, seed).values
    else:
        start = _values_of(energy, direction)
    start = _project(projector, start)
    if not np.any(start):
        raise ConfigurationError("the starting direction vanishes on the subspace")
    problem = _RayMaxima(energy, config, projector, r)
    start = problem.normalize(start)
    first = problem.evaluate(start)
    result = descend(
        problem.evaluate,
        start,
        dot=problem.dot,
        precondition=problem.precondition,
        tol=config.tol,
        max_iter=config.max_iter,
        step_rule=config.step_rule,
        memory=config.memory,
        normalize=problem.normalize,
        norm=problem.norm,
        initial_scale=problem.initial_scale(start, first),
        stall_rounds=config.stall_rounds,
    )
    values = result.evaluation.payload * result.x
    point = _accept(energy, values, result, kind, seed, radius=r, rim=rho, **extra)
    if point.value < rho - 1e-10:
        logger.warning(
            "mountain-pass value %r lies below the rim estimate %r", point.value, rho
        )
    logger.info(
        "%s converged: value=%r residual=%r iterations=%d",
        point.label,
        point.value,
        point.grad_residual,
        point.iterations,
    )
    return point


def coercivity_spot_check(energy, seed=0, doublings=12):
    """value(2^i f) must end strictly increasing and positive for a random f"""
    f = random_field(energy.model, energy.dirac.gamma, seed)
    profile = energy.ray_profile(f, [2.0**i for i in range(doublings + 1)])
    tail = profile[-3:]
    holds = bool(np.all(np.diff(tail) > 0) and tail[-1] > 0)
    if not holds:
        logger.warning("coercivity spot check failed: tail profile %r", tail.tolist())
    return holds


def global_minimize(energy, config=None, projector=None, seed_branch=True):
    """
    Lowest-value converged point among the zero field, the constant branch
    and random restarts, ordered by (value, residual, seed).
    """
    config = config or SolveConfig()
    _require(energy, ("Hi",), "global_minimize")
    coercivity_spot_check(energy, config.seed)
    model = energy.model
    zero = np.zeros(energy.dirac.field_shape, dtype=np.complex128)
    _, gradient = energy.evaluate(zero)
    candidates = [
        CriticalPoint(
            field=SpinorField(model, zero),
            value=0.0,
            grad_residual=energy.residual_of(_project(projector, gradient)),
            kind=CriticalKind.MINIMIZER,
            seed=-2,
        )
    ]
    starts = []
    if seed_branch and projector is None and not energy.nl.is_zero:
        try:
            starts.append((-1, constant_branch(energy).field.values))
        except ConfigurationError as exc:
            logger.info("no constant branch start: %s", exc)
    for index in range(config.restarts):
        seed = config.seed + index
        values = _project(projector, random_field(model, energy.dirac.gamma, seed).values)
        t = _ray_trough(energy.ray(values), config.max_doublings)
        if t > 0:
            starts.append((seed, t * values))
    for restart, (seed, start) in enumerate(starts):
        result = _minimize_from(energy, config, start, projector, restart)
        try:
            candidates.append(
                _accept(energy, result.x, result, CriticalKind.MINIMIZER, seed)
            )
        except ConvergenceError as exc:
            logger.warning("restart with seed %d discarded: %s", seed, exc)
    winner = min(
        (point for point in candidates if point.grad_residual <= config.tol),
        key=lambda point: (point.value, point.grad_residual, point.seed),
        default=None,
    )
    if winner is None:
        raise ConvergenceError("no minimization candidate converged")
    logger.info(
        "minimizer value=%r residual=%r seed=%s", winner.value, winner.grad_residual, winner.seed
    )
    return winner


def branch_amplitude(energy, s):
    """Fiber length A of the single-mode solution at momentum magnitude s"""
    nl = energy.nl
    if nl.is_zero:
        raise ClassificationError("the zero nonlinearity has no nontrivial branch")
    if nl.e == energy.p:
        raise ClassificationError("there is no single-mode branch when e = p")
    if s == 0:
        raise ConfigurationError("the mode has zero momentum")
    return (s**energy.p / nl.c) ** (1.0 / (nl.e - energy.p))


def branch_value(energy, mode):
    """Closed-form energy c A^e (1/p - 1/e) vol of the single-mode solution"""
    s = float(np.linalg.norm(_momentum(energy.model, mode)))
    amplitude = branch_amplitude(energy, s)
    nl = energy.nl
    return energy.model.volume * nl.c * amplitude**nl.e * (1.0 / energy.p - 1.0 / nl.e)


def branch_point(energy, mode, spinor=None):
    """
    The exact solution A * plane_wave(mode) * spinor (unit spinor) of the
    power equation; exact when eps and eps_H vanish.
    """
    model = energy.model
    mode = tuple(int(k) for k in mode)
    if len(mode) != model.m:
        raise ConfigurationError(f"mode must have {model.m} entries")
    s = float(np.linalg.norm(_momentum(model, mode)))
    amplitude = branch_amplitude(energy, s)
    if spinor is None:
        spinor = np.zeros(energy.dirac.spinor_dim, dtype=np.complex128)
        spinor[0] = 1.0
    spinor = np.asarray(spinor, dtype=np.complex128)
    if spinor.shape != (energy.dirac.spinor_dim,) or not np.any(spinor):
        raise ConfigurationError(
            f"spinor must be a nonzero vector with {energy.dirac.spinor_dim} entries"
        )
    spinor = spinor / np.linalg.norm(spinor)
    f = SpinorField(model, amplitude * model.phase(mode)[..., None] * spinor)
    kind = CriticalKind.CONSTANT_BRANCH if not any(mode) else CriticalKind.BRANCH
    return CriticalPoint(
        field=f,
        value=energy.value(f),
        grad_residual=energy.residual_norm(f),
        kind=kind,
        nehari_defect=energy.nehari_defect(f),
        radius=amplitude,
    )


def constant_branch(energy, spinor=None):
    return branch_point(energy, (0,) * energy.model.m, spinor)


# Fountain-type sweeps


def _same_value(a, b):
    return abs(a - b) <= DISTINCT_TOLERANCE * max(abs(a), abs(b), 1e-300)


def _level_subspace(model, basis, level):
    """Z_k: the eigenfields of the Galerkin space left after removing H_{k-1}"""
    return SubspaceProjector(model, basis.fields[2 * (level - 1) :])


def _dual_level(energy, config, projector, level, seed):
    direction = projector(random_field(energy.model, energy.dirac.gamma, seed).values)
    ray = energy.ray(direction)
    t = _ray_trough(ray, config.max_doublings)
    if t <= 0:
        raise SolverError(f"level {level} carries no negative energy along its start")
    result = _minimize_from(energy, config, t * direction, projector)
    point = _accept(
        energy,
        result.x,
        result,
        CriticalKind.DUAL_FOUNTAIN,
        seed,
        level=level,
        radius=t * ray.sobolev,
    )
    if not point.value < 0:
        raise SolverError(f"level {level} minimum {point.value!r} is not negative")
    return point


def _sweep(energy, config, kmax, kind, estimate_tails):
    config = config or SolveConfig()
    if kmax < 1:
        raise ConfigurationError(f"kmax must be >= 1, got {kmax}")
    model = energy.model
    spinor_dim = energy.dirac.spinor_dim
    depth = min(config.galerkin_k, model.site_count * spinor_dim // 2)
    if depth < config.galerkin_k:
        logger.warning("the grid limits the Galerkin depth to %d", depth)
    basis = energy.dirac.eigenbasis(2 * depth)
    levels, failures, distinct = [], [], []
    for level in range(1, depth + 1):
        projector = _level_subspace(model, basis, level)
        if projector.dimension <= spinor_dim:
            logger.warning("level %d spans a single mode; the sweep stops", level)
            break
        seed = config.seed + level
        try:
            if kind == CriticalKind.FOUNTAIN:
                point = mountain_pass(
                    energy, config, None, projector, kind, seed, level=level
                )
            else:
                point = _dual_level(energy, config, projector, level, seed)
        except SolverError as exc:
            logger.warning("level %d failed: %s", level, exc)
            failures.append(LevelFailure(level, str(exc)))
            continue
        levels.append(point)
        if not distinct or not _same_value(point.value, distinct[-1].value):
            distinct.append(point)
        if len(distinct) >= kmax:
            break
    points = [replace(point, k=index) for index, point in enumerate(distinct, 1)]
    if len(points) < kmax:
        logger.warning("only %d of %d distinct critical values found", len(points), kmax)
    tails = []
    if estimate_tails and energy.nl.e < energy.classification.critical_exponent:
        eigen_config = EigenConfig(p=energy.p, restarts=1, seed=config.seed)
        tails = [
            tail_embedding_constant(
                energy.dirac, energy.p, energy.nl.e, 2 * (point.level - 1), eigen_config
            )
            for point in points
        ]
    sweep = Sweep(
        kind=kind, points=points, levels=levels, failures=failures, tail_estimates=tails
    )
    if not sweep.trend_holds:
        logger.warning("level values %r break the %s trend", sweep.level_values, kind)
    return sweep


def fountain_sequence(energy, config=None, kmax=4, estimate_tails=False):
    """
    Heuristic fountain values c_1 < c_2 < ...: level k runs the mountain pass
    on Z_k, the Galerkin space with H_{k-1} removed, from a seeded random
    field there. Z_k shrinks with k, so the level values climb; the k-th
    reported point is the k-th distinct one in level order.
    """
    _require(energy, ("H1", "H2", "H3", "H4"), "fountain_sequence")
    return _sweep(energy, config, kmax, CriticalKind.FOUNTAIN, estimate_tails)


def dual_fountain_sequence(energy, config=None, kmax=4, estimate_tails=False):
    """Negative critical values increasing toward 0, one minimization of L per Z_k"""
    _require(energy, ("Hi", "Hii", "H4"), "dual_fountain_sequence")
    return _sweep(energy, config, kmax, CriticalKind.DUAL_FOUNTAIN, estimate_tails)


def weak_form_defect(energy, f, test_count=50, seed=0):
    """
    max over L2-normalized test fields phi of
    |int <|Df|^(p-2) Df, D phi> - int <H_psi(f), phi>|
    """
    values = energy.dirac.check(f)
    model = energy.model
    _, flux, _ = energy.kinetic_parts(values)
    source = energy.nl.derivative(values)
    probes = probe_values(
        model,
        energy.dirac.spinor_dim,
        test_count,
        seed,
        lead=values if np.any(values) else None,
    )
    return max(
        abs(
            model.cell_volume
            * (np.vdot(flux, energy.dirac.dirac_values(phi)) - np.vdot(source, phi))
        )
        for phi in probes
    )
