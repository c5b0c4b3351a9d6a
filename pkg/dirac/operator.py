"""
Fourier-spectral Dirac operator on a flat spin torus.

In Fourier space D is the multiplier i * sum_j gamma_j xi_j(k), a Hermitian
N x N symbol with eigenvalues +|xi(k)| and -|xi(k)|, each of multiplicity
N/2. The spinor Laplacian is the scalar multiplier |xi(k)|^2.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.fft

from lattice.fields import (
    SpinorField,
    fiber_length,
    integrate,
    lp_norm_values,
)
from shared.exceptions import ConfigurationError, ShapeMismatchError

logger = logging.getLogger(__name__)

MERGE_TOLERANCE = 1e-10


def default_eps(p):
    """Regularization of |g|^(p-2): 1e-8 below p = 2, none above"""
    return 1e-8 if p < 2 else 0.0


def regularized_weight(length, exponent, eps):
    """
    (|g|^2 + eps^2)^(exponent / 2) with the convention that the weight
    vanishes where |g| = 0 and eps = 0, so weight * g stays 0 there.
    """
    if exponent == 0:
        return np.ones_like(length)
    base = length**2 + eps**2
    with np.errstate(divide="ignore", invalid="ignore"):
        weight = base ** (exponent / 2.0)
    if eps == 0 and exponent < 0:
        weight = np.where(length > 0, weight, 0.0)
    return weight


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    mode: tuple

    @property
    def magnitude(self):
        return abs(self.eigenvalue)


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Lowest Fourier-Dirac eigenfields, L2-orthonormal"""

    eigenvalues: np.ndarray
    modes: tuple
    fields: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)


class DiracOperator:
    def __init__(self, model, gamma):
        if gamma.m != model.m:
            raise ShapeMismatchError(
                f"gamma set is for m={gamma.m}, model has m={model.m}"
            )
        self.model = model
        self.gamma = gamma
        momenta = np.stack(np.meshgrid(*model.wavenumbers(), indexing="ij"), axis=-1)
        self.momenta = momenta
        self.magnitude = np.linalg.norm(momenta, axis=-1)
        self.symbol = gamma.symbol(momenta)
        self.is_singular = not model.is_invertible
        squares = self.magnitude**2
        floor = squares[squares > 0].min()
        self.inverse_square = 1.0 / np.maximum(squares, floor)
        for array in (self.momenta, self.magnitude, self.symbol, self.inverse_square):
            array.setflags(write=False)

    def __repr__(self):
        return f"DiracOperator(m={self.model.m}, grid={self.model.grid}, twist={self.model.twist})"

    @property
    def spinor_dim(self):
        return self.gamma.spinor_dim

    @property
    def field_shape(self):
        return self.model.grid + (self.spinor_dim,)

    def check(self, f):
        if f.model != self.model or f.spinor_dim != self.spinor_dim:
            raise ShapeMismatchError("field does not live on this operator's model")
        return f.values

    # Array-level actions

    def forward(self, values):
        return scipy.fft.fftn(values, axes=self.model.axes)

    def backward(self, coefficients):
        return scipy.fft.ifftn(coefficients, axes=self.model.axes)

    def dirac_values(self, values):
        coefficients = self.forward(values)
        return self.backward(np.matmul(self.symbol, coefficients[..., None])[..., 0])

    def laplacian_values(self, values):
        return self.backward((self.magnitude**2)[..., None] * self.forward(values))

    def covariant_gradient_values(self, values):
        """The m-tuple of derivatives, multipliers i xi_j(k), stacked on axis 0"""
        coefficients = self.forward(values)
        return np.stack(
            [
                self.backward(1j * self.momenta[..., j, None] * coefficients)
                for j in range(self.model.m)
            ]
        )

    def flux_values(self, dirac_values, p, eps):
        """|g|^(p-2) g, regularized, for g = D f"""
        if p == 2:
            return dirac_values
        weight = regularized_weight(fiber_length(dirac_values), p - 2.0, eps)
        return weight[..., None] * dirac_values

    def p_dirac_values(self, values, p, eps=None):
        eps = default_eps(p) if eps is None else eps
        return self.dirac_values(self.flux_values(self.dirac_values(values), p, eps))

    def precondition(self, values):
        """Inverse of D^2 (floored at the lowest nonzero mode)"""
        return self.backward(self.inverse_square[..., None] * self.forward(values))

    # Field-level operations

    def apply_dirac(self, f):
        return SpinorField(self.model, self.dirac_values(self.check(f)))

    def apply_laplacian(self, f):
        return SpinorField(self.model, self.laplacian_values(self.check(f)))

    def apply_p_dirac(self, f, p, eps=None):
        """D(|Df|^(p-2) Df) with the multiplier (|Df|^2 + eps^2)^((p-2)/2)"""
        if not p > 1:
            raise ConfigurationError(f"p must be > 1, got {p}")
        eps = default_eps(p) if eps is None else eps
        if eps < 0:
            raise ConfigurationError(f"eps must be >= 0, got {eps}")
        values = self.check(f)
        if p == 2:
            return SpinorField(self.model, self.dirac_values(self.dirac_values(values)))
        return SpinorField(self.model, self.p_dirac_values(values, p, eps))

    def sobolev_norm(self, f, p):
        """||f||_{1,p} = ||Df||_p; only a seminorm on singular models"""
        if self.is_singular:
            logger.warning(
                "sobolev_norm on a model with all-periodic twist is only a seminorm"
            )
        return lp_norm_values(self.model, self.dirac_values(self.check(f)), p)

    def h1p_norm(self, f, p):
        """(||f||_p^p + ||grad f||_p^p)^(1/p)"""
        values = self.check(f)
        if p < 1:
            raise ConfigurationError(f"p must be >= 1, got {p}")
        gradient = self.covariant_gradient_values(values)
        length = np.sqrt(np.sum(gradient.real**2 + gradient.imag**2, axis=(0, -1)))
        total = integrate(self.model, fiber_length(values) ** p) + integrate(
            self.model, length**p
        )
        return total ** (1.0 / p)

    def norm_equivalence_ratio(self, f, p):
        return lp_norm_values(
            self.model, self.dirac_values(self.check(f)), p
        ) / self.h1p_norm(f, p)

    # Spectrum

    def _mode_groups(self):
        flat = self.magnitude.ravel()
        order = np.argsort(flat, kind="stable")
        groups = []
        for index in order:
            value = flat[index]
            if groups and value - groups[-1][0] <= MERGE_TOLERANCE * max(1.0, groups[-1][0]):
                groups[-1][1].append(int(index))
            else:
                groups.append((float(value), [int(index)]))
        return groups

    def mode_of(self, flat_index):
        position = np.unravel_index(flat_index, self.model.grid)
        numbers = self.model.mode_numbers()
        return tuple(int(numbers[axis][i]) for axis, i in enumerate(position))

    def spectrum(self, count):
        """
        The count smallest-magnitude eigenvalues of D with multiplicities,
        negative before positive at equal magnitude; each entry carries the
        first mode (FFT order) of its magnitude shell.
        """
        if count < 1:
            raise ConfigurationError(f"count must be >= 1, got {count}")
        half = self.spinor_dim // 2
        entries = []
        for magnitude, indices in self._mode_groups():
            mode = self.mode_of(indices[0])
            if magnitude <= MERGE_TOLERANCE:
                entries.append(SpectrumEntry(0.0, self.spinor_dim * len(indices), mode))
            else:
                entries.append(SpectrumEntry(-magnitude, half * len(indices), mode))
                entries.append(SpectrumEntry(magnitude, half * len(indices), mode))
            if len(entries) >= count:
                break
        return entries[:count]

    def eigenbasis(self, count):
        """
        The count lowest eigenfields, ordered by (|xi|, FFT mode order,
        eigenvalue), each a plane wave times a symbol eigenvector, L2-normalized.
        """
        fields, eigenvalues, modes = [], [], []
        norm = 1.0 / np.sqrt(self.model.volume)
        for _, indices in self._mode_groups():
            for index in indices:
                position = np.unravel_index(index, self.model.grid)
                values, vectors = np.linalg.eigh(self.symbol[position])
                mode = self.mode_of(index)
                phase = self.model.phase(mode)
                for column in range(self.spinor_dim):
                    if len(fields) == count:
                        break
                    fields.append(norm * phase[..., None] * vectors[:, column])
                    eigenvalues.append(float(values[column]))
                    modes.append(mode)
            if len(fields) == count:
                break
        if len(fields) < count:
            raise ConfigurationError(
                f"the grid carries only {len(fields)} eigenfields, {count} requested"
            )
        shape = (count,) + self.field_shape
        return EigenBasis(
            eigenvalues=np.array(eigenvalues),
            modes=tuple(modes),
            fields=np.array(fields, dtype=np.complex128).reshape(shape),
        )
