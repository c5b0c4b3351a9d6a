"""
Nonlinearities H(x, psi) with constant coefficients.

The power family is H = (c/e) [(|psi|^2 + eps_H^2)^(e/2) - eps_H^e], whose
derivative is H_psi = c (|psi|^2 + eps_H^2)^((e-2)/2) psi; with eps_H = 0
this is (c/e)|psi|^e. The eps_H^e shift keeps H(0) = 0.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dirac.operator import regularized_weight
from energy.choices import NonlinearityKind, Regime
from lattice.fields import SpinorField, fiber_length, integrate
from shared.exceptions import ConfigurationError


def critical_exponent(p, m):
    """Sobolev exponent p* = mp / (m - p); infinite when p >= m"""
    return m * p / (m - p) if p < m else math.inf


def default_eps_h(e):
    return 0.0 if e >= 2 else 1e-8


@dataclass(frozen=True)
class Classification:
    """Which growth conditions an instance satisfies for given (p, m)"""

    p: float
    m: int
    critical_exponent: float
    regime: str
    h1: bool
    h2: bool
    h3: bool
    h4: bool
    hi: bool
    hii: bool
    q: Optional[float] = None
    mu: Optional[float] = None
    nu: Optional[float] = None

    @property
    def superlinear(self):
        return self.h1 and self.h2 and self.h3

    @property
    def sublinear(self):
        return self.hi and self.hii

    def as_dict(self):
        return {
            "p": self.p,
            "m": self.m,
            "critical_exponent": None
            if math.isinf(self.critical_exponent)
            else self.critical_exponent,
            "regime": self.regime,
            "H1": self.h1,
            "H2": self.h2,
            "H3": self.h3,
            "H4": self.h4,
            "Hi": self.hi,
            "Hii": self.hii,
            "q": self.q,
            "mu": self.mu,
            "nu": self.nu,
        }


@dataclass(frozen=True)
class Nonlinearity:
    kind: str = NonlinearityKind.POWER
    c: float = 1.0
    e: float = 4.0
    eps_h: Optional[float] = None

    def __post_init__(self):
        if self.kind not in NonlinearityKind.values:
            raise ConfigurationError(f"unknown nonlinearity kind {self.kind!r}")
        object.__setattr__(self, "kind", NonlinearityKind(self.kind))
        for name in ("c", "e"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        if self.kind == NonlinearityKind.POWER:
            if self.c <= 0:
                raise ConfigurationError(f"c must be > 0, got {self.c}")
            if self.e <= 1:
                raise ConfigurationError(f"e must be > 1, got {self.e}")
        eps_h = default_eps_h(self.e) if self.eps_h is None else float(self.eps_h)
        if not math.isfinite(eps_h) or eps_h < 0:
            raise ConfigurationError(f"eps_H must be >= 0, got {eps_h}")
        object.__setattr__(self, "eps_h", eps_h)

    @classmethod
    def zero(cls):
        return cls(kind=NonlinearityKind.ZERO, c=0.0, e=2.0, eps_h=0.0)

    @classmethod
    def power(cls, c=1.0, e=4.0, eps_h=None):
        return cls(kind=NonlinearityKind.POWER, c=c, e=e, eps_h=eps_h)

    @property
    def is_zero(self):
        return self.kind == NonlinearityKind.ZERO

    def density(self, values):
        """Pointwise H(x, psi(x))"""
        if self.is_zero:
            return np.zeros(values.shape[:-1])
        length = fiber_length(values)
        shifted = (length**2 + self.eps_h**2) ** (self.e / 2.0) - self.eps_h**self.e
        return (self.c / self.e) * shifted

    def derivative(self, values):
        """Pointwise H_psi(x, psi(x))"""
        if self.is_zero:
            return np.zeros_like(values)
        weight = regularized_weight(fiber_length(values), self.e - 2.0, self.eps_h)
        return self.c * weight[..., None] * values

    def growth_constant(self, volume):
        """C with hcal(f) <= C (1 + ||f||_e^e) for every field on a torus of this volume"""
        if self.is_zero:
            return 0.0
        return (self.c / self.e) * 2.0 ** (self.e / 2.0) * max(1.0, self.eps_h**self.e * volume)

    def hcal_values(self, model, values):
        return integrate(model, self.density(values))

    def hcal(self, f):
        """Integral of H(x, f(x))"""
        return self.hcal_values(f.model, f.values)

    def hcal_prime(self, f):
        """Density field H_psi(x, f(x)), the L2 representative of dH(f)"""
        return SpinorField(f.model, self.derivative(f.values))

    def classify(self, p, m):
        star = critical_exponent(p, m)
        if self.is_zero:
            return Classification(
                p=p,
                m=m,
                critical_exponent=star,
                regime=Regime.ZERO,
                h1=True,
                h2=False,
                h3=True,
                h4=True,
                hi=True,
                hii=False,
            )
        e = self.e
        if e > p:
            return Classification(
                p=p,
                m=m,
                critical_exponent=star,
                regime=Regime.SUPERLINEAR if e < star else Regime.SUPERCRITICAL,
                h1=e < star,
                h2=True,
                h3=True,
                h4=True,
                hi=False,
                hii=False,
                q=e if e < star else None,
                mu=e,
            )
        if e < p:
            return Classification(
                p=p,
                m=m,
                critical_exponent=star,
                regime=Regime.SUBLINEAR,
                h1=True,
                h2=False,
                h3=False,
                h4=True,
                hi=True,
                hii=True,
                q=e,
                nu=e,
            )
        return Classification(
            p=p,
            m=m,
            critical_exponent=star,
            regime=Regime.BORDERLINE,
            h1=True,
            h2=False,
            h3=False,
            h4=True,
            hi=False,
            hii=False,
        )

    def as_dict(self):
        return {"kind": str(self.kind), "c": self.c, "e": self.e, "eps_H": self.eps_h}
