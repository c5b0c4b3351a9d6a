import numpy as np

from dirac.galerkin import SubspaceProjector


class TestSubspaceProjector:
    """Test Galerkin, tail and deflated projections"""

    def test_span_is_idempotent(self, dirac, field_factory):
        """Test P^2 = P on H_k"""
        projector = SubspaceProjector.span(dirac, 6)
        once = projector(field_factory(0).values)
        assert np.allclose(projector(once), once)
        assert projector.dimension == 6

    def test_tail_complements_span(self, dirac, field_factory):
        """Test P_span + P_tail = I"""
        values = field_factory(1).values
        span = SubspaceProjector.span(dirac, 4)
        tail = SubspaceProjector.tail(dirac, 4)
        assert np.allclose(span(values) + tail(values), values)
        assert tail.dimension is None

    def test_empty_tail_is_identity(self, dirac, field_factory):
        """Test that the tail of nothing keeps every field"""
        values = field_factory(2).values
        assert np.allclose(SubspaceProjector.tail(dirac, 0)(values), values)

    def test_deflation_removes_direction(self, dirac, field_factory):
        """Test that a deflated vector is annihilated"""
        basis = dirac.eigenbasis(4)
        projector = SubspaceProjector.span(dirac, 4, deflate=[basis.fields[0]])
        assert np.allclose(projector(basis.fields[0]), 0.0, atol=1e-12)
        assert projector.dimension == 3
        extended = projector.with_deflation([basis.fields[1]])
        assert extended.dimension == 2
        values = field_factory(3).values
        coefficient = dirac.model.cell_volume * np.vdot(basis.fields[1], extended(values))
        assert abs(coefficient) < 1e-12
