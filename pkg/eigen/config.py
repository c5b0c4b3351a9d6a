import math
from dataclasses import dataclass, field, replace
from typing import Optional

from django.conf import settings

from shared.descent import StepRule
from shared.exceptions import ConfigurationError


def _setting(name):
    return lambda: settings.PDIRAC[name]


@dataclass(frozen=True)
class EigenConfig:
    """Solver settings for the Rayleigh-quotient minimizers"""

    p: float = 2.0
    tolerance: float = field(default_factory=_setting("EIGEN_TOLERANCE"))
    max_iter: int = field(default_factory=_setting("EIGEN_MAX_ITER"))
    step_rule: StepRule = field(default_factory=StepRule)
    restarts: int = field(default_factory=_setting("EIGEN_RESTARTS"))
    deflation_count: int = 0
    eps: Optional[float] = None
    seed: int = 0
    memory: int = 8
    stall_rounds: int = 100
    allow_singular: bool = False

    def __post_init__(self):
        if not math.isfinite(self.p) or self.p <= 1:
            raise ConfigurationError(f"p must be > 1, got {self.p}")
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.restarts < 1:
            raise ConfigurationError(f"restarts must be >= 1, got {self.restarts}")
        if self.deflation_count < 0:
            raise ConfigurationError("deflation_count must be >= 0")
        if self.memory < 0:
            raise ConfigurationError("memory must be >= 0")
        if self.eps is not None and not self.eps >= 0:
            raise ConfigurationError(f"eps must be >= 0, got {self.eps}")

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {
            "p": self.p,
            "tolerance": self.tolerance,
            "max_iter": self.max_iter,
            "armijo": self.step_rule.armijo,
            "growth": self.step_rule.growth,
            "shrink": self.step_rule.shrink,
            "restarts": self.restarts,
            "deflation_count": self.deflation_count,
            "eps": self.eps,
            "seed": self.seed,
            "memory": self.memory,
        }
