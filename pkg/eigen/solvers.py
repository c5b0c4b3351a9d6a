"""
The eigenvalue problem D_p psi = lambda |psi|^(p-2) psi and its relatives.

Every solver here minimizes a ratio

    T(u) = int[(|Du|^2 + eps^2)^(p/2) - eps^p] / (int |u|^q)^(p/q)

over a (possibly projected) unit L^q sphere with the shared descent engine.
q = p gives the Rayleigh quotient; q != p on a tail subspace gives the
embedding constants tau_k^p. With p = 2 a unit step of the preconditioned
direction is exactly one step of inverse iteration.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from dirac.galerkin import SubspaceProjector
from dirac.operator import default_eps, regularized_weight
from eigen.config import EigenConfig
from energy.nonlinearity import critical_exponent
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
from shared.exceptions import ConfigurationError, ConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenPair:
    eigenvalue: float
    field: SpinorField
    residual: float
    iterations: int
    seed: int
    converged: bool = True
    reason: str = "converged"
    trace: list = field(default_factory=list)

    def as_row(self):
        return {
            "lambda": self.eigenvalue,
            "residual": self.residual,
            "iterations": self.iterations,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class MonotoneCheck:
    lhs: float
    rhs: float
    holds: bool


def rayleigh(dirac, p, f):
    """||Df||_p^p / ||f||_p^p"""
    values = dirac.check(f)
    bottom = lp_norm_values(dirac.model, values, p)
    if bottom == 0:
        raise ConfigurationError("the Rayleigh quotient of the zero field is undefined")
    return (lp_norm_values(dirac.model, dirac.dirac_values(values), p) / bottom) ** p


def _ratio(dirac, p, q, values):
    top = lp_norm_values(dirac.model, dirac.dirac_values(values), p)
    return top**p / lp_norm_values(dirac.model, values, q) ** p


class RatioProblem:
    def __init__(self, dirac, p, q, eps=None, projector=None):
        self.dirac = dirac
        self.model = dirac.model
        self.p = p
        self.q = q
        self.eps = default_eps(p) if eps is None else eps
        self.eps_q = self.eps if q == p else default_eps(q)
        self.projector = projector

    def project(self, values):
        return values if self.projector is None else self.projector(values)

    def normalize(self, values):
        return values / lp_norm_values(self.model, values, self.q)

    def precondition(self, values):
        return self.project(self.dirac.precondition(values))

    def dot(self, a, b):
        return dot_values(self.model, a, b)

    def sobolev_norm(self, values, evaluation=None):
        return lp_norm_values(self.model, self.dirac.dirac_values(values), self.p)

    def _top(self, values):
        dv = self.dirac.dirac_values(values)
        length = fiber_length(dv)
        if self.p == 2:
            return integrate(self.model, length**2), dv, length
        density = (length**2 + self.eps**2) ** (self.p / 2.0) - self.eps**self.p
        flux = regularized_weight(length, self.p - 2.0, self.eps)[..., None] * dv
        return integrate(self.model, density), flux, length

    def _bottom(self, values):
        length = fiber_length(values)
        if self.q == 2:
            return integrate(self.model, length**2), values
        density = (length**2 + self.eps_q**2) ** (self.q / 2.0) - self.eps_q**self.q
        weighted = regularized_weight(length, self.q - 2.0, self.eps_q)[..., None] * values
        return integrate(self.model, density), weighted

    def evaluate(self, values):
        a, flux, _ = self._top(values)
        b, weighted = self._bottom(values)
        scale = b ** (self.p / self.q)
        direction = self.project(self.dirac.dirac_values(flux) - (a / b) * weighted)
        residual = lp_norm_values(self.model, direction, self.p / (self.p - 1.0))
        return Evaluation(a / scale, (self.p / scale) * direction, residual)

    def initial_scale(self, values):
        """Step scale making the first preconditioned step inverse-iteration sized"""
        a, _, length = self._top(values)
        b, _ = self._bottom(values)
        if a <= 0:
            return 1.0
        squares = integrate(self.model, length**2)
        return (b ** (self.p / self.q) / self.p) * (squares / a) / max(1.0, self.p - 1.0)


def _solve_ratio(dirac, config, q=None, projector=None):
    """One descent per restart, seeds config.seed + i, all results returned"""
    q = config.p if q is None else q
    problem = RatioProblem(dirac, config.p, q, config.eps, projector)
    pairs = []
    for restart in range(config.restarts):
        seed = config.seed + restart
        start = problem.project(random_field(dirac.model, dirac.gamma, seed).values)
        if lp_norm_values(dirac.model, start, q) == 0:
            raise ConfigurationError("the admissible subspace is trivial")
        start = problem.normalize(start)
        result = descend(
            problem.evaluate,
            start,
            dot=problem.dot,
            precondition=problem.precondition,
            tol=config.tolerance,
            max_iter=config.max_iter,
            step_rule=config.step_rule,
            memory=config.memory,
            normalize=problem.normalize,
            norm=problem.sobolev_norm,
            initial_scale=problem.initial_scale(start),
            restart=restart,
            stall_rounds=config.stall_rounds,
        )
        pair = EigenPair(
            eigenvalue=_ratio(dirac, config.p, q, result.x),
            field=SpinorField(dirac.model, result.x),
            residual=result.residual,
            iterations=result.iterations,
            seed=seed,
            converged=result.converged,
            reason=result.reason,
            trace=result.trace,
        )
        if pair.converged:
            logger.info(
                "restart %d (seed %d) converged: lambda=%r residual=%r iterations=%d",
                restart,
                seed,
                pair.eigenvalue,
                pair.residual,
                pair.iterations,
            )
        else:
            logger.warning(
                "restart %d (seed %d) stopped on %s: residual=%r after %d iterations",
                restart,
                seed,
                pair.reason,
                pair.residual,
                pair.iterations,
            )
        pairs.append(pair)
    return pairs


def select_pair(pairs):
    """Lowest eigenvalue among converged restarts, then residual, then seed"""
    converged = [pair for pair in pairs if pair.converged]
    if not converged:
        best = min(pairs, key=lambda pair: (pair.residual, pair.seed))
        raise ConvergenceError(
            f"no restart converged (best residual {best.residual!r}, {best.reason})",
            trace=best.trace,
        )
    return min(converged, key=lambda pair: (pair.eigenvalue, pair.residual, pair.seed))


def _check_invertible(dirac, config):
    if dirac.is_singular and not config.allow_singular:
        raise ConfigurationError(
            "D has a kernel on an all-periodic model; set allow_singular to proceed"
        )


def eigen_restarts(dirac, config=None, projector=None):
    config = config or EigenConfig()
    _check_invertible(dirac, config)
    return _solve_ratio(dirac, config, projector=projector)


def min_eigen(dirac, config=None):
    """First eigenpair by multi-start projected minimization of the Rayleigh quotient"""
    return select_pair(eigen_restarts(dirac, config))


def ls_sequence(dirac, config=None, n=None):
    """
    Approximate lambda_1 <= ... <= lambda_n: Galerkin restriction to the
    2n lowest Fourier-Dirac eigenfields plus L2 deflation of every pair
    found so far. Exact for p = 2, a heuristic otherwise.
    """
    config = config or EigenConfig()
    n = config.deflation_count if n is None else n
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    _check_invertible(dirac, config)
    span = SubspaceProjector.span(dirac, 2 * n)
    found = []
    for level in range(n):
        projector = span.with_deflation([pair.field.values for pair in found])
        try:
            pair = select_pair(_solve_ratio(dirac, config, projector=projector))
        except ConvergenceError as exc:
            logger.warning("level %d of the sequence failed: %s", level + 1, exc)
            break
        found.append(pair)
    if len(found) < n:
        logger.warning("only %d of %d eigenpairs converged", len(found), n)
    return sorted(found, key=lambda pair: (pair.eigenvalue, pair.seed))


def weak_eigen_check(dirac, p, lam, f, test_count=16, seed=0, eps=None):
    """
    max over normalized test fields phi of
    |int <|Df|^(p-2) Df, D phi> - lam int <|f|^(p-2) f, phi>|.

    The tests are f / ||f||_2 followed by random single-mode plane waves.
    """
    values = dirac.check(f)
    model = dirac.model
    if not np.any(values):
        raise ConfigurationError("weak_eigen_check needs a nonzero field")
    eps = default_eps(p) if eps is None else eps
    dv = dirac.dirac_values(values)
    flux = regularized_weight(fiber_length(dv), p - 2.0, eps)[..., None] * dv
    source = regularized_weight(fiber_length(values), p - 2.0, eps)[..., None] * values
    tests = probe_values(model, dirac.spinor_dim, test_count, seed, lead=values)
    defects = [
        abs(
            model.cell_volume
            * (np.vdot(flux, dirac.dirac_values(phi)) - lam * np.vdot(source, phi))
        )
        for phi in tests
    ]
    return max(defects)


def monotone_inequality_check(dirac, p, f, g, eps=0.0):
    """
    <Bf - Bg, f - g> against (||f||^(p-1) - ||g||^(p-1)) (||f|| - ||g||)
    with B f = D(|Df|^(p-2) Df) paired through D and ||.|| = ||D.||_p.
    """
    model = dirac.model
    df = dirac.dirac_values(dirac.check(f))
    dg = dirac.dirac_values(dirac.check(g))
    bf = regularized_weight(fiber_length(df), p - 2.0, eps)[..., None] * df
    bg = regularized_weight(fiber_length(dg), p - 2.0, eps)[..., None] * dg
    lhs = dot_values(model, bf - bg, df - dg)
    nf = lp_norm_values(model, df, p)
    ng = lp_norm_values(model, dg, p)
    rhs = (nf ** (p - 1) - ng ** (p - 1)) * (nf - ng)
    return MonotoneCheck(lhs=lhs, rhs=rhs, holds=lhs >= rhs - 1e-10 * max(1.0, abs(rhs)))


def tail_embedding_constant(dirac, p, q, k, config=None):
    """
    tau_k = inf ||Du||_p over the complement of the k lowest Dirac
    eigenfields with ||u||_q = 1. For p = q = 2 it is the (k+1)-th
    smallest |eigenvalue| of D.
    """
    star = critical_exponent(p, dirac.model.m)
    if not 1 <= q < star:
        raise ConfigurationError(f"q must lie in [1, {star}), got {q}")
    if k < 0:
        raise ConfigurationError(f"k must be >= 0, got {k}")
    config = config or EigenConfig(p=p)
    if config.p != p:
        config = config.replace(p=p)
    projector = SubspaceProjector.tail(dirac, k) if k else None
    pair = select_pair(_solve_ratio(dirac, config, q=q, projector=projector))
    return pair.eigenvalue ** (1.0 / p)


def tail_sequence(dirac, p, q, kmax, config=None):
    """tau_0, ..., tau_kmax, nondecreasing up to solver tolerance"""
    return [tail_embedding_constant(dirac, p, q, k, config) for k in range(kmax + 1)]
