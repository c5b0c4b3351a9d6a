from dataclasses import dataclass, field, replace
from typing import Optional

from django.conf import settings

from shared.descent import StepRule
from shared.exceptions import ConfigurationError


def _setting(name):
    return lambda: settings.PDIRAC[name]


@dataclass(frozen=True)
class SolveConfig:
    """Settings for the critical-point solvers"""

    path_points: int = field(default_factory=_setting("PATH_POINTS"))
    step_rule: StepRule = field(default_factory=StepRule)
    tol: float = field(default_factory=_setting("SOLVE_TOLERANCE"))
    max_iter: int = field(default_factory=_setting("SOLVE_MAX_ITER"))
    seed: int = 0
    galerkin_k: int = field(default_factory=_setting("GALERKIN_K"))
    restarts: int = 4
    rim_radius: Optional[float] = None
    rim_samples: int = 32
    memory: int = 8
    stall_rounds: int = 100
    max_doublings: int = 60

    def __post_init__(self):
        if self.path_points < 8:
            raise ConfigurationError(f"path_points must be >= 8, got {self.path_points}")
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 0:
            raise ConfigurationError(f"max_iter must be >= 0, got {self.max_iter}")
        if self.galerkin_k < 1:
            raise ConfigurationError(f"galerkin_k must be >= 1, got {self.galerkin_k}")
        if self.restarts < 0:
            raise ConfigurationError(f"restarts must be >= 0, got {self.restarts}")
        if self.rim_radius is not None and not self.rim_radius > 0:
            raise ConfigurationError(f"rim_radius must be > 0, got {self.rim_radius}")
        if self.rim_samples < 32:
            raise ConfigurationError(f"rim_samples must be >= 32, got {self.rim_samples}")
        if self.memory < 0:
            raise ConfigurationError("memory must be >= 0")
        if self.max_doublings < 1:
            raise ConfigurationError("max_doublings must be >= 1")

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {
            "path_points": self.path_points,
            "armijo": self.step_rule.armijo,
            "growth": self.step_rule.growth,
            "shrink": self.step_rule.shrink,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "seed": self.seed,
            "galerkin_k": self.galerkin_k,
            "restarts": self.restarts,
            "rim_radius": self.rim_radius,
            "rim_samples": self.rim_samples,
            "memory": self.memory,
        }
