"""
The energy functional L(psi) = (1/p) int |D psi|^p - int H(x, psi).

Gradients are L2 Riesz representatives (density form):
grad L(psi) = D(|D psi|^(p-2) D psi) - H_psi(x, psi). With eps > 0 the
kinetic density is (1/p)[(|D psi|^2 + eps^2)^(p/2) - eps^p], whose exact
derivative is the regularized p-Dirac operator.
"""

import logging
import math
from functools import cached_property

import numpy as np

from dirac.operator import default_eps, regularized_weight
from energy.nonlinearity import Nonlinearity, critical_exponent
from lattice.fields import (
    SpinorField,
    fiber_length,
    inner_values,
    integrate,
    lp_norm_values,
)
from shared.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class Energy:
    def __init__(self, dirac, p, nl=None, eps=None, override_p_range=False):
        p = float(p)
        if not math.isfinite(p) or p <= 1:
            raise ConfigurationError(f"p must be > 1, got {p}")
        m = dirac.model.m
        if p >= m and not override_p_range:
            raise ConfigurationError(
                f"p must be < m = {m} (pass override_p_range to allow p={p})"
            )
        eps = default_eps(p) if eps is None else float(eps)
        if not math.isfinite(eps) or eps < 0:
            raise ConfigurationError(f"eps must be >= 0, got {eps}")
        self.dirac = dirac
        self.p = p
        self.eps = eps
        self.nl = nl if nl is not None else Nonlinearity.zero()
        self.override_p_range = override_p_range
        if not self.nl.is_zero and self.nl.e >= critical_exponent(p, m):
            logger.warning(
                "exponent e=%s is not below the critical exponent %s; H is outside its growth range",
                self.nl.e,
                critical_exponent(p, m),
            )

    def __repr__(self):
        return f"Energy(p={self.p}, eps={self.eps}, nl={self.nl!r}, dirac={self.dirac!r})"

    @property
    def model(self):
        return self.dirac.model

    @property
    def dual_exponent(self):
        return self.p / (self.p - 1.0)

    @cached_property
    def classification(self):
        return self.nl.classify(self.p, self.model.m)

    def with_nonlinearity(self, nl):
        return Energy(self.dirac, self.p, nl, self.eps, self.override_p_range)

    # Array-level pieces shared with the solvers

    def kinetic_parts(self, values):
        """(kinetic density, flux |Dv|^(p-2) Dv, Dv) for a values array"""
        dv = self.dirac.dirac_values(values)
        length = fiber_length(dv)
        if self.p == 2:
            return 0.5 * length**2, dv, dv
        shifted = (length**2 + self.eps**2) ** (self.p / 2.0) - self.eps**self.p
        flux = regularized_weight(length, self.p - 2.0, self.eps)[..., None] * dv
        return shifted / self.p, flux, dv

    def evaluate(self, values):
        """(value, gradient values) of L at a values array"""
        kinetic, flux, _ = self.kinetic_parts(values)
        value = integrate(self.model, kinetic) - self.nl.hcal_values(self.model, values)
        gradient = self.dirac.dirac_values(flux) - self.nl.derivative(values)
        return value, gradient

    def value_of(self, values):
        kinetic, _, _ = self.kinetic_parts(values)
        return integrate(self.model, kinetic) - self.nl.hcal_values(self.model, values)

    def residual_of(self, gradient):
        return lp_norm_values(self.model, gradient, self.dual_exponent)

    # Field-level operations

    def value(self, f):
        return self.value_of(self.dirac.check(f))

    def gradient(self, f):
        _, gradient = self.evaluate(self.dirac.check(f))
        return SpinorField(self.model, gradient)

    def residual_norm(self, f):
        """
        L^{p'} norm of the gradient density, p' = p / (p - 1). A surrogate
        for the dual norm of dL(f) on H^{1,p}.
        """
        _, gradient = self.evaluate(self.dirac.check(f))
        return self.residual_of(gradient)

    def nehari_defect(self, f):
        """|<flux, Df> - <H_psi(f), f>| / max(1, <flux, Df>)"""
        values = self.dirac.check(f)
        _, flux, dv = self.kinetic_parts(values)
        kinetic = inner_values(self.model, flux, dv)
        potential = inner_values(self.model, self.nl.derivative(values), values)
        return abs(kinetic - potential) / max(1.0, kinetic)

    def ray(self, values):
        return Ray(self, values)

    def ray_profile(self, f, ts):
        """value(t f) for each t in ts"""
        ray = self.ray(self.dirac.check(f))
        return np.array([ray.value(t) for t in ts])


class Ray:
    """
    t -> L(t v) along a fixed direction. Dv is computed once, so values and
    slopes along the ray cost no transforms.
    """

    def __init__(self, energy, values):
        self.energy = energy
        self.values = values
        self.dv = energy.dirac.dirac_values(values)
        self.length = fiber_length(self.dv)
        self.sobolev = lp_norm_values(energy.model, self.dv, energy.p)

    def value(self, t):
        energy = self.energy
        p, eps = energy.p, energy.eps
        scaled = t * self.length
        if p == 2:
            kinetic = 0.5 * scaled**2
        else:
            kinetic = ((scaled**2 + eps**2) ** (p / 2.0) - eps**p) / p
        return integrate(energy.model, kinetic) - energy.nl.hcal_values(
            energy.model, t * self.values
        )

    def slope(self, t):
        """d/dt L(t v) = <grad L(t v), v>"""
        energy = self.energy
        if energy.p == 2:
            weight = 1.0
        else:
            weight = regularized_weight(t * self.length, energy.p - 2.0, energy.eps)
        kinetic = integrate(energy.model, weight * t * self.length**2)
        return kinetic - inner_values(
            energy.model, energy.nl.derivative(t * self.values), self.values
        )
