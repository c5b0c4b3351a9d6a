"""
Concrete complex Clifford representations (gamma matrices).

Generators are built recursively by tensor products of 2x2 blocks: the
Hermitian set for m = 2 is (s1, s2), for m = 3 it is (s1, s2, s3); an odd
set of size 2k+1 extends the odd set of size 2k-1 by E_j (x) s1 followed by
I (x) s2 and I (x) s3; an even set is the first m matrices of the next odd
set. The gammas are i times these Hermitian generators, so they are
anti-Hermitian and square to -I.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from shared.exceptions import ConfigurationError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@lru_cache(maxsize=None)
def _hermitian_generators(m):
    if m == 2:
        return (SIGMA_X, SIGMA_Y)
    if m == 3:
        return (SIGMA_X, SIGMA_Y, SIGMA_Z)
    if m % 2 == 0:
        return _hermitian_generators(m + 1)[:m]
    lower = _hermitian_generators(m - 2)
    identity = np.eye(lower[0].shape[0], dtype=np.complex128)
    return tuple(np.kron(g, SIGMA_X) for g in lower) + (
        np.kron(identity, SIGMA_Y),
        np.kron(identity, SIGMA_Z),
    )


@dataclass(frozen=True, eq=False)
class GammaSet:
    """Gamma matrices gamma_1..gamma_m acting on C^N, N = 2^(m // 2)"""

    m: int
    spinor_dim: int
    gammas: np.ndarray

    def __post_init__(self):
        gammas = np.array(self.gammas, dtype=np.complex128)
        expected = (self.m, self.spinor_dim, self.spinor_dim)
        if gammas.shape != expected:
            raise ConfigurationError(
                f"gammas must have shape {expected}, got {gammas.shape}"
            )
        gammas.setflags(write=False)
        object.__setattr__(self, "gammas", gammas)

    def symbol(self, xi):
        """
        Hermitian Dirac symbol i * sum_j xi_j gamma_j.

        ``xi`` may carry leading axes; its last axis has length m and the
        result has shape ``xi.shape[:-1] + (N, N)``.
        """
        xi = np.asarray(xi, dtype=np.float64)
        if xi.shape[-1] != self.m:
            raise ConfigurationError(
                f"momentum must have {self.m} components, got {xi.shape[-1]}"
            )
        return 1j * np.tensordot(xi, self.gammas, axes=([-1], [0]))

    def scaled(self, factor):
        return GammaSet(self.m, self.spinor_dim, self.gammas * factor)

    def replaced(self, index, matrix):
        gammas = self.gammas.copy()
        gammas[index] = matrix
        return GammaSet(self.m, self.spinor_dim, gammas)


def build_gamma(m):
    """Gamma matrices for dimension m >= 2, deterministic in m"""
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise ConfigurationError(f"m must be an integer, got {m!r}")
    if m < 2:
        raise ConfigurationError(f"m must be >= 2, got {m}")
    hermitian = _hermitian_generators(int(m))
    gammas = 1j * np.stack(hermitian)
    return GammaSet(m=int(m), spinor_dim=gammas.shape[1], gammas=gammas)


def check_relations(gamma):
    """
    Largest Clifford-relation defect plus largest anti-Hermiticity defect,
    both measured as entrywise maxima.
    """
    identity = np.eye(gamma.spinor_dim)
    relation = 0.0
    for i in range(gamma.m):
        for j in range(gamma.m):
            a, b = gamma.gammas[i], gamma.gammas[j]
            defect = a @ b + b @ a + 2.0 * (i == j) * identity
            relation = max(relation, float(np.max(np.abs(defect))))
    hermiticity = max(
        float(np.max(np.abs(g + g.conj().T))) for g in gamma.gammas
    )
    return relation + hermiticity
