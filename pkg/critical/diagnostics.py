"""
Palais-Smale style diagnostics over solver traces. Purely descriptive: a
trace is checked for bounded iterate norms and for monotone residual
decrease after its last restart.
"""

import math
from dataclasses import dataclass

from lattice.fields import random_field
from shared.exceptions import ConfigurationError
from shared.types import TraceEntry

BOUND_RATIO = 1e3

BOUNDED = "bounded"
RAY_GROWTH = "unbounded: energy ray growth, expected without a PS failure"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class PSReport:
    bounded: bool
    residual_monotone: bool
    final_residual: float
    final_value: float
    max_norm: float
    iterations: int
    label: str

    def as_dict(self):
        return {
            "bounded": self.bounded,
            "residual_monotone": self.residual_monotone,
            "final_residual": self.final_residual,
            "final_value": self.final_value,
            "max_norm": self.max_norm,
            "iterations": self.iterations,
            "label": self.label,
        }


def ps_diagnostic(energy, trace):
    """
    ``bounded`` holds when max ||x_n|| / ||x_0|| stays below 1e3. Unbounded
    traces whose energies fall toward -infinity under H2 growth are labeled
    as ray growth.
    """
    if not trace:
        raise ConfigurationError("ps_diagnostic needs a non-empty trace")
    norms = [entry.norm for entry in trace if math.isfinite(entry.norm)]
    first = next((norm for norm in norms if norm > 0), 0.0)
    max_norm = max(norms, default=math.nan)
    if not norms:
        bounded = True
    elif first == 0:
        bounded = max_norm <= BOUND_RATIO
    else:
        bounded = max_norm / first <= BOUND_RATIO

    last_restart = trace[-1].restart
    residuals = [
        entry.residual
        for entry in trace
        if entry.restart == last_restart and math.isfinite(entry.residual)
    ]
    monotone = all(b <= a for a, b in zip(residuals, residuals[1:]))

    values = [entry.value for entry in trace]
    falling = (
        len(values) >= 3
        and values[-1] < min(0.0, values[-2])
        and values[-2] < values[-3]
    )
    if bounded:
        label = BOUNDED
    elif energy.classification.h2 and falling:
        label = RAY_GROWTH
    else:
        label = UNBOUNDED
    return PSReport(
        bounded=bounded,
        residual_monotone=monotone,
        final_residual=trace[-1].residual,
        final_value=trace[-1].value,
        max_norm=max_norm,
        iterations=trace[-1].iteration,
        label=label,
    )


def doubling_trace(energy, f=None, doublings=12, seed=0):
    """Trace entries for value(2^i f), i = 0..doublings, with residuals"""
    if f is None:
        f = random_field(energy.model, energy.dirac.gamma, seed)
    trace = []
    for index in range(doublings + 1):
        t = 2.0**index
        scaled = f * t
        trace.append(
            TraceEntry(
                iteration=index,
                value=energy.value(scaled),
                residual=energy.residual_norm(scaled),
                norm=energy.dirac.sobolev_norm(scaled, energy.p),
                step=t,
            )
        )
    return trace
