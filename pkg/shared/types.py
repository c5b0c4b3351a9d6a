"""
Shared types used across multiple apps
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

ComplexArray = NDArray[np.complex128]
RealArray = NDArray[np.float64]


@dataclass(frozen=True)
class TraceEntry:
    """One iteration of a solver, as recorded in its provenance trace"""

    iteration: int
    value: float
    residual: float
    norm: float
    step: float
    restart: int = 0

    def as_dict(self):
        return {
            "iteration": self.iteration,
            "value": self.value,
            "residual": self.residual,
            "norm": self.norm,
            "step": self.step,
            "restart": self.restart,
        }
