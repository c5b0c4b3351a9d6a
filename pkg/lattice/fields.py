"""
Spinor fields on a torus model: values of shape (n_1, ..., n_m, N).

Reductions use compensated summation (math.fsum) over the row-major
flattening, so results do not depend on array memory layout.
"""

import math
from dataclasses import dataclass

import numpy as np

from lattice.torus import TorusModel
from shared.exceptions import ConfigurationError, ShapeMismatchError


def fiber_length(values):
    """Pointwise Hermitian length |f(x)| of a values array"""
    return np.sqrt(np.sum(values.real**2 + values.imag**2, axis=-1))


def integrate(model, density):
    """Midpoint-rule integral of a real density sampled on the grid"""
    return model.cell_volume * math.fsum(np.ravel(density).tolist())


def lp_norm_values(model, values, p):
    if p < 1:
        raise ConfigurationError(f"p must be >= 1, got {p}")
    length = fiber_length(values)
    if p == 2:
        return math.sqrt(integrate(model, length**2))
    return integrate(model, length**p) ** (1.0 / p)


def inner_values(model, a, b):
    return integrate(model, np.sum(a.real * b.real + a.imag * b.imag, axis=-1))


def dot_values(model, a, b):
    """Uncompensated real inner product used inside iterative solvers"""
    return model.cell_volume * float(np.vdot(a, b).real)


@dataclass(frozen=True, eq=False)
class SpinorField:
    model: TorusModel
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.ndim != self.model.m + 1 or values.shape[:-1] != self.model.grid:
            raise ShapeMismatchError(
                f"values of shape {values.shape} do not fit grid {self.model.grid}"
            )
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("field values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def spinor_dim(self):
        return self.values.shape[-1]

    def with_values(self, values):
        return SpinorField(self.model, values)

    def _check(self, other):
        if self.model != other.model or self.values.shape != other.values.shape:
            raise ShapeMismatchError("fields live on different models or spinor spaces")

    def __add__(self, other):
        self._check(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self.with_values(self.values - other.values)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, scalar):
        return self.with_values(self.values * scalar)

    __rmul__ = __mul__

    def is_zero(self):
        return not np.any(self.values)

    def normalized(self, p=2.0):
        norm = lp_norm(self, p)
        if norm == 0:
            raise ConfigurationError("cannot normalize the zero field")
        return self * (1.0 / norm)


def lp_norm(f, p):
    """(sum_x cell_volume |f(x)|^p)^(1/p)"""
    return lp_norm_values(f.model, f.values, p)


def inner(f, g):
    """Real part of the Hermitian L2 product, sum_x cell_volume Re<f(x), g(x)>"""
    f._check(g)
    return inner_values(f.model, f.values, g.values)


def _spinor_dim(model, gamma):
    if gamma.m != model.m:
        raise ShapeMismatchError(
            f"gamma set is for m={gamma.m}, model has m={model.m}"
        )
    return gamma.spinor_dim


def zero_field(model, gamma):
    return SpinorField(model, np.zeros(model.grid + (_spinor_dim(model, gamma),)))


def random_field(model, gamma, seed):
    """Independent standard complex normal entries, (X + iY) / sqrt(2)"""
    shape = model.grid + (_spinor_dim(model, gamma),)
    rng = np.random.default_rng(seed)
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return SpinorField(model, (real + 1j * imag) / math.sqrt(2.0))


def constant_field(model, gamma, spinor):
    spinor = np.asarray(spinor, dtype=np.complex128)
    if spinor.shape != (_spinor_dim(model, gamma),):
        raise ShapeMismatchError(f"spinor must have {gamma.spinor_dim} entries")
    return SpinorField(model, np.broadcast_to(spinor, model.grid + spinor.shape))


def plane_wave(model, gamma, mode, spinor):
    """The stored field exp(2 pi i k.x / L) * spinor for an integer mode k"""
    spinor = np.asarray(spinor, dtype=np.complex128)
    if spinor.shape != (_spinor_dim(model, gamma),):
        raise ShapeMismatchError(f"spinor must have {gamma.spinor_dim} entries")
    return SpinorField(model, model.phase(tuple(mode))[..., None] * spinor)


def probe_values(model, spinor_dim, count, seed, lead=None):
    """
    L2-normalized test arrays: ``lead`` (if given) scaled to unit L2 norm,
    then random single-mode plane waves with random unit spinors.
    """
    probes = []
    if lead is not None:
        probes.append(lead / lp_norm_values(model, lead, 2))
    rng = np.random.default_rng(seed)
    numbers = model.mode_numbers()
    while len(probes) < count:
        mode = tuple(int(rng.choice(axis)) for axis in numbers)
        spinor = rng.standard_normal(spinor_dim) + 1j * rng.standard_normal(spinor_dim)
        spinor /= np.linalg.norm(spinor)
        probes.append(model.phase(mode)[..., None] * spinor / math.sqrt(model.volume))
    return probes
