"""
Projections onto Fourier-Dirac Galerkin subspaces, their tails, and their
deflated versions. Coefficients are complex L2 products, so every
projector acts on the complex span of its vectors.
"""

import numpy as np


class SubspaceProjector:
    def __init__(self, model, basis_fields=None, complement=False, deflate=()):
        self.model = model
        self.basis = (
            np.zeros((0,)) if basis_fields is None else np.asarray(basis_fields)
        )
        self.complement = complement
        self.deflation = []
        for vector in deflate:
            self._add_deflation(np.asarray(vector))

    @classmethod
    def span(cls, operator, count, deflate=()):
        """H_k: span of the count lowest eigenfields"""
        return cls(operator.model, operator.eigenbasis(count).fields, deflate=deflate)

    @classmethod
    def tail(cls, operator, count):
        """Orthogonal complement of the count lowest eigenfields"""
        if count == 0:
            return cls(operator.model, complement=True)
        return cls(operator.model, operator.eigenbasis(count).fields, complement=True)

    def _coefficients(self, values):
        return self.model.cell_volume * np.tensordot(
            self.basis.conj(), values, axes=values.ndim
        )

    def _project(self, values):
        if self.basis.size:
            inside = np.tensordot(self._coefficients(values), self.basis, axes=1)
        else:
            inside = np.zeros_like(values)
        return values - inside if self.complement else inside

    def _add_deflation(self, vector):
        vector = self(vector)
        norm = np.sqrt(self.model.cell_volume * np.vdot(vector, vector).real)
        if norm > 1e-12:
            self.deflation.append(vector / norm)

    def with_deflation(self, vectors):
        projector = SubspaceProjector(
            self.model,
            self.basis if self.basis.size else None,
            complement=self.complement,
        )
        for vector in list(self.deflation) + [np.asarray(v) for v in vectors]:
            projector._add_deflation(vector)
        return projector

    def __call__(self, values):
        out = self._project(values)
        for vector in self.deflation:
            out = out - vector * (self.model.cell_volume * np.vdot(vector, out))
        return out

    @property
    def dimension(self):
        """Complex dimension for span projectors, None for tails"""
        if self.complement:
            return None
        return len(self.basis) - len(self.deflation)
