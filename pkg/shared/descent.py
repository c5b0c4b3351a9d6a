"""
Preconditioned line-search descent shared by the eigen and critical solvers.

Directions come from the limited-memory BFGS two-loop recursion seeded with a
problem-specific preconditioner; ``memory=0`` gives plain preconditioned
steepest descent. Step lengths follow a backtracking Armijo rule that
remembers the last accepted step and grows it by a fixed factor.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional

import numpy as np

from shared.exceptions import ConfigurationError
from shared.types import ComplexArray, TraceEntry

logger = logging.getLogger(__name__)

ROUNDOFF = 8 * np.finfo(float).eps


@dataclass(frozen=True)
class StepRule:
    """Backtracking rule: Armijo constant, growth and shrink factors"""

    armijo: float = 1e-4
    growth: float = 2.0
    shrink: float = 0.5
    max_step: float = 1.0
    max_backtracks: int = 60

    def __post_init__(self):
        if not 0.0 < self.armijo < 1.0:
            raise ConfigurationError("armijo must lie in (0, 1)")
        if self.growth < 1.0:
            raise ConfigurationError("growth must be >= 1")
        if not 0.0 < self.shrink < 1.0:
            raise ConfigurationError("shrink must lie in (0, 1)")
        if self.max_step <= 0.0:
            raise ConfigurationError("max_step must be positive")
        if self.max_backtracks < 1:
            raise ConfigurationError("max_backtracks must be >= 1")


class Evaluation(NamedTuple):
    """Objective value, Riesz gradient and residual at one iterate"""

    value: float
    gradient: ComplexArray
    residual: float
    payload: Any = None


@dataclass
class DescentResult:
    x: ComplexArray
    evaluation: Evaluation
    iterations: int
    converged: bool
    reason: str
    trace: list = field(default_factory=list)

    @property
    def value(self):
        return self.evaluation.value

    @property
    def residual(self):
        return self.evaluation.residual


def _two_loop(gradient, pairs, precondition, dot, scale):
    q = gradient
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * dot(s, q)
        alphas.append(a)
        q = q - a * y
    if pairs:
        s, y, _ = pairs[-1]
        py = precondition(y)
        yy = dot(y, py)
        gamma = dot(s, y) / yy if yy > 0 else scale
        r = gamma * precondition(q)
    else:
        r = scale * precondition(q)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * dot(y, r)
        r = r + (a - b) * s
    return r


def descend(
    evaluate: Callable[[ComplexArray], Evaluation],
    x0: ComplexArray,
    *,
    dot: Callable[[ComplexArray, ComplexArray], float],
    precondition: Callable[[ComplexArray], ComplexArray],
    tol: float,
    max_iter: int,
    step_rule: StepRule = StepRule(),
    memory: int = 8,
    normalize: Optional[Callable[[ComplexArray], ComplexArray]] = None,
    norm: Optional[Callable[[ComplexArray, Evaluation], float]] = None,
    initial_scale: float = 1.0,
    restart: int = 0,
    stall_rounds: int = 100,
    stall_tol: float = 1e-14,
) -> DescentResult:
    """
    Minimize ``evaluate(x).value`` from ``x0`` until the residual reported by
    ``evaluate`` drops to ``tol``.

    ``dot`` is the real inner product the gradient is a Riesz representative
    for; ``precondition`` must be symmetric positive definite in it.
    ``normalize`` is applied after every accepted step (projected descent on
    a sphere) and ``norm(x, evaluation)`` feeds the trace.
    """
    x = normalize(x0) if normalize is not None else x0
    current = evaluate(x)
    pairs = deque(maxlen=memory) if memory > 0 else deque()
    step = step_rule.max_step
    stalled = 0
    trace = []
    reason = "max_iter"
    converged = False
    iteration = 0

    while True:
        trace.append(
            TraceEntry(
                iteration=iteration,
                value=current.value,
                residual=current.residual,
                norm=norm(x, current) if norm is not None else math.nan,
                step=step,
                restart=restart,
            )
        )
        if current.residual <= tol:
            converged, reason = True, "converged"
            break
        if iteration >= max_iter:
            break
        if stalled >= stall_rounds:
            reason = "stagnation"
            break

        if memory > 0:
            direction = -_two_loop(
                current.gradient, pairs, precondition, dot, initial_scale
            )
        else:
            direction = -initial_scale * precondition(current.gradient)
        slope = dot(current.gradient, direction)
        if not slope < 0.0:
            pairs.clear()
            direction = -initial_scale * precondition(current.gradient)
            slope = dot(current.gradient, direction)
            if not slope < 0.0:
                reason = "no descent direction"
                break

        alpha = min(step * step_rule.growth, step_rule.max_step)
        slack = ROUNDOFF * max(1.0, abs(current.value))
        accepted = None
        for _ in range(step_rule.max_backtracks):
            candidate = x + alpha * direction
            if normalize is not None:
                candidate = normalize(candidate)
            trial = evaluate(candidate)
            if math.isfinite(trial.value) and (
                trial.value <= current.value + step_rule.armijo * alpha * slope + slack
            ):
                accepted = candidate, trial
                break
            alpha *= step_rule.shrink
        if accepted is None:
            reason = "line search failed"
            break

        candidate, trial = accepted
        if memory > 0:
            s = candidate - x
            y = trial.gradient - current.gradient
            sy = dot(s, y)
            if sy > 1e-12 * math.sqrt(max(dot(s, s) * dot(y, y), 0.0)):
                pairs.append((s, y, 1.0 / sy))

        decrease = current.value - trial.value
        stalled = stalled + 1 if decrease < stall_tol * max(1.0, abs(current.value)) else 0
        x, current, step = candidate, trial, alpha
        iteration += 1
        if iteration % 500 == 0:
            logger.debug(
                "descent iteration %d value=%r residual=%r step=%r",
                iteration,
                current.value,
                current.residual,
                step,
            )

    return DescentResult(
        x=x,
        evaluation=current,
        iterations=iteration,
        converged=converged,
        reason=reason,
        trace=trace,
    )
