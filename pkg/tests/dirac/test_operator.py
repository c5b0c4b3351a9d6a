import math

import numpy as np
import pytest

from clifford.gamma import build_gamma
from dirac.operator import DiracOperator, regularized_weight
from lattice.fields import constant_field, inner, lp_norm, random_field
from shared.exceptions import ConfigurationError, ShapeMismatchError
from tests.factories import TorusModelFactory


@pytest.fixture
def dirac8(gamma3):
    return DiracOperator(TorusModelFactory(grid=(8, 8, 8)), gamma3)


class TestDiracOperator:
    """Test the Fourier Dirac operator"""

    def test_gamma_dimension_must_match(self, model):
        """Test that a gamma set for another m is rejected"""
        with pytest.raises(ShapeMismatchError):
            DiracOperator(model, build_gamma(2))

    def test_field_from_other_model(self, dirac, gamma3):
        """Test that foreign fields are rejected"""
        other = random_field(TorusModelFactory(m=2), build_gamma(2), 0)
        with pytest.raises(ShapeMismatchError):
            dirac.apply_dirac(other)

    def test_square_is_laplacian(self, dirac, field_factory):
        """Test D^2 f = -Delta f on the flat torus"""
        for seed in range(5):
            f = field_factory(seed)
            twice = dirac.apply_dirac(dirac.apply_dirac(f)).values
            laplacian = dirac.apply_laplacian(f).values
            assert np.max(np.abs(twice - laplacian)) < 1e-12 * np.max(np.abs(laplacian))

    def test_self_adjoint(self, dirac, field_factory):
        """Test <Df, g> = <f, Dg>"""
        for seed in range(0, 20, 2):
            f, g = field_factory(seed), field_factory(seed + 1)
            lhs = inner(dirac.apply_dirac(f), g)
            rhs = inner(f, dirac.apply_dirac(g))
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_constant_field_length(self, dirac, gamma3):
        """Test |D c| = |xi_0| |c| pointwise for a constant spinor"""
        f = constant_field(dirac.model, gamma3, [1.0, 1j])
        df = dirac.apply_dirac(f)
        assert lp_norm(df, 2) == pytest.approx(math.pi * math.sqrt(3) * math.sqrt(2))

    def test_p_dirac_at_two_is_square(self, dirac, field_factory):
        """Test D_2 = D^2"""
        f = field_factory(0)
        assert np.allclose(
            dirac.apply_p_dirac(f, 2.0).values, dirac.apply_laplacian(f).values
        )

    def test_p_dirac_is_homogeneous(self, dirac, field_factory):
        """Test D_p(t f) = t^(p-1) D_p(f) without regularization"""
        f = field_factory(1)
        scaled = dirac.apply_p_dirac(f * 2.0, 3.0, eps=0.0).values
        assert np.allclose(scaled, 4.0 * dirac.apply_p_dirac(f, 3.0, eps=0.0).values)

    def test_p_dirac_rejects_bad_exponent(self, dirac, field_factory):
        """Test p <= 1 and negative eps"""
        with pytest.raises(ConfigurationError):
            dirac.apply_p_dirac(field_factory(0), 1.0)
        with pytest.raises(ConfigurationError):
            dirac.apply_p_dirac(field_factory(0), 1.5, eps=-1.0)

    def test_regularized_weight_vanishes_at_zero(self):
        """Test the 0 * inf convention for p < 2 and eps = 0"""
        weight = regularized_weight(np.array([0.0, 4.0]), -0.5, 0.0)
        assert weight[0] == 0.0
        assert weight[1] == pytest.approx(0.5)

    def test_norms(self, dirac, field_factory):
        """Test the Dirac seminorm against the full Sobolev norm"""
        f = field_factory(2)
        assert dirac.sobolev_norm(f, 1.5) > 0
        ratio = dirac.norm_equivalence_ratio(f, 1.5)
        assert 0 < ratio < math.inf
        assert dirac.norm_equivalence_ratio(f, 2.0) == pytest.approx(
            lp_norm(dirac.apply_dirac(f), 2) / dirac.h1p_norm(f, 2.0)
        )


class TestNormEquivalence:
    """Test the Dirac norm against the full Sobolev norm"""

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_upper_bound(self, dirac, field_factory, p):
        """Test sobolev_norm <= m h1p_norm on random fields"""
        for seed in range(100):
            f = field_factory(seed) * (seed + 1.0)
            assert 0 < dirac.sobolev_norm(f, p) <= 3 * dirac.h1p_norm(f, p)

    @pytest.mark.slow
    def test_minimum_ratio_is_grid_stable(self, gamma3):
        """Test that the minimum ratio over 1000 fields moves < 20% from 8^3 to 16^3"""
        minima = []
        for n in (8, 16):
            operator = DiracOperator(TorusModelFactory(grid=(n, n, n)), gamma3)
            minima.append(
                min(
                    operator.norm_equivalence_ratio(random_field(operator.model, gamma3, seed), 2.0)
                    for seed in range(1000)
                )
            )
        coarse, fine = minima
        assert coarse > 0
        assert fine > 0
        assert abs(fine - coarse) < 0.2 * coarse


class TestSpectrum:
    """Test the exact spectrum of D"""

    def test_smallest_magnitude(self, dirac8):
        """Test |lambda_1| = pi sqrt(3) on the antiperiodic 8^3 torus"""
        first = dirac8.spectrum(2)
        assert first[0].magnitude == pytest.approx(math.pi * math.sqrt(3), rel=1e-12)
        assert first[0].eigenvalue < 0 < first[1].eigenvalue
        assert first[0].multiplicity == 8

    def test_spectrum_is_sorted(self, dirac8):
        """Test nondecreasing magnitudes"""
        magnitudes = [entry.magnitude for entry in dirac8.spectrum(10)]
        assert magnitudes == sorted(magnitudes)

    def test_singular_model_has_kernel(self, gamma3):
        """Test the zero eigenvalue of the periodic torus"""
        dirac = DiracOperator(TorusModelFactory(twist=(0.0, 0.0, 0.0)), gamma3)
        assert dirac.is_singular
        zero = dirac.spectrum(1)[0]
        assert zero.eigenvalue == 0.0
        assert zero.multiplicity == 2

    def test_rejects_empty_request(self, dirac):
        """Test count >= 1"""
        with pytest.raises(ConfigurationError):
            dirac.spectrum(0)


class TestEigenBasis:
    """Test the lowest Fourier-Dirac eigenfields"""

    def test_orthonormal(self, dirac):
        """Test L2 orthonormality"""
        basis = dirac.eigenbasis(12)
        flat = basis.fields.reshape(12, -1)
        gram = dirac.model.cell_volume * flat.conj() @ flat.T
        assert np.allclose(gram, np.eye(12), atol=1e-12)

    def test_eigenfields(self, dirac_x):
        """Test D phi = lambda phi for every basis field"""
        basis = dirac_x.eigenbasis(8)
        for value, values in zip(basis.eigenvalues, basis.fields):
            assert np.allclose(dirac_x.dirac_values(values), value * values, atol=1e-12)
        assert np.allclose(np.abs(basis.eigenvalues[:4]), math.pi)

    def test_too_many_requested(self, dirac):
        """Test that the grid bounds the basis size"""
        with pytest.raises(ConfigurationError):
            dirac.eigenbasis(4 * 4 * 4 * 2 + 1)
