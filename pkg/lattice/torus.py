"""
Flat torus models with a chosen spin structure.

A spin structure is a per-direction twist delta_j in {0, 1/2}; after a
global gauge transformation every field is stored periodic and the twist
shifts the Fourier momenta to xi_j = 2 pi (k_j + delta_j) / L_j.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from shared.exceptions import ConfigurationError

ALLOWED_TWISTS = (0.0, 0.5)


@dataclass(frozen=True)
class TorusModel:
    m: int
    grid: tuple
    lengths: Optional[tuple] = None
    twist: Optional[tuple] = None

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, (int, np.integer)):
            raise ConfigurationError(f"m must be an integer, got {self.m!r}")
        if self.m < 2:
            raise ConfigurationError(f"m must be >= 2, got {self.m}")
        grid = tuple(int(n) for n in self.grid)
        lengths = tuple(
            float(v) for v in (self.lengths if self.lengths is not None else [1.0] * self.m)
        )
        twist = tuple(
            float(v) for v in (self.twist if self.twist is not None else [0.0] * self.m)
        )
        for name, values in (("grid", grid), ("lengths", lengths), ("twist", twist)):
            if len(values) != self.m:
                raise ConfigurationError(
                    f"{name} must have {self.m} entries, got {len(values)}"
                )
        for n in grid:
            if n < 4 or n % 2:
                raise ConfigurationError(
                    f"grid sizes must be even and >= 4, got {n}"
                )
        for length in lengths:
            if not math.isfinite(length) or length <= 0:
                raise ConfigurationError(f"lengths must be positive, got {length}")
        for delta in twist:
            if delta not in ALLOWED_TWISTS:
                raise ConfigurationError(
                    f"twist entries must be 0 or 0.5, got {delta}"
                )
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "twist", twist)

    @classmethod
    def cube(cls, m, n, twist=None, length=1.0):
        return cls(m=m, grid=(n,) * m, lengths=(length,) * m, twist=twist)

    @property
    def cell_volume(self):
        return math.prod(length / n for length, n in zip(self.lengths, self.grid))

    @property
    def volume(self):
        return math.prod(self.lengths)

    @property
    def is_invertible(self):
        """False when every direction is periodic (D then has a zero mode)"""
        return any(delta != 0.0 for delta in self.twist)

    @property
    def axes(self):
        return tuple(range(self.m))

    @property
    def site_count(self):
        return math.prod(self.grid)

    def mode_numbers(self):
        """Integer mode numbers per axis in FFT order, centered range [-n/2, n/2)"""
        return tuple(np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(int) for n in self.grid)

    def wavenumbers(self):
        """Twisted momenta xi_j = 2 pi (k_j + delta_j) / L_j per axis, FFT order"""
        return tuple(
            2.0 * np.pi * (k + delta) / length
            for k, delta, length in zip(self.mode_numbers(), self.twist, self.lengths)
        )

    def phase(self, mode):
        """Stored (gauge-transformed) values of the plane wave with integer mode"""
        if len(mode) != self.m:
            raise ConfigurationError(f"mode must have {self.m} entries")
        coordinates = np.meshgrid(
            *(np.arange(n) / n for n in self.grid), indexing="ij"
        )
        angle = sum(2.0 * np.pi * k * x for k, x in zip(mode, coordinates))
        return np.exp(1j * angle)

    def describe(self):
        return {
            "m": self.m,
            "grid": list(self.grid),
            "lengths": list(self.lengths),
            "twist": list(self.twist),
            "cell_volume": self.cell_volume,
            "volume": self.volume,
            "invertible": self.is_invertible,
        }
