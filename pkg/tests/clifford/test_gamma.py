import numpy as np
import pytest

from clifford.gamma import build_gamma, check_relations
from shared.exceptions import ConfigurationError


class TestBuildGamma:
    """Test gamma matrix construction"""

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_relations_hold(self, m):
        """Test that every dimension satisfies the Clifford relations"""
        gamma = build_gamma(m)
        assert gamma.spinor_dim == 2 ** (m // 2)
        assert gamma.gammas.shape == (m, gamma.spinor_dim, gamma.spinor_dim)
        assert check_relations(gamma) < 1e-14

    def test_gammas_square_to_minus_identity(self):
        """Test gamma_i^2 = -I and unitarity"""
        gamma = build_gamma(4)
        identity = np.eye(gamma.spinor_dim)
        for g in gamma.gammas:
            assert np.allclose(g @ g, -identity, atol=1e-14)
            assert np.allclose(g.conj().T @ g, identity, atol=1e-14)

    def test_construction_is_deterministic(self):
        """Test that two builds agree entrywise"""
        assert np.array_equal(build_gamma(5).gammas, build_gamma(5).gammas)

    def test_gammas_are_read_only(self):
        """Test that the matrices cannot be mutated in place"""
        gamma = build_gamma(3)
        with pytest.raises(ValueError):
            gamma.gammas[0, 0, 0] = 1.0

    @pytest.mark.parametrize("m", [1, 0, -3])
    def test_rejects_small_dimension(self, m):
        """Test that m < 2 is rejected"""
        with pytest.raises(ConfigurationError):
            build_gamma(m)

    def test_rejects_non_integer_dimension(self):
        """Test that m must be an integer"""
        with pytest.raises(ConfigurationError):
            build_gamma(2.5)


class TestCheckRelations:
    """Test the relation defect on broken sets"""

    def test_identity_in_place_of_gamma(self):
        """Test that gamma_1 = I gives a defect of at least 2"""
        gamma = build_gamma(2)
        broken = gamma.replaced(0, np.eye(2))
        assert check_relations(broken) >= 2.0

    def test_scaled_set(self):
        """Test that doubling every gamma gives a defect of at least 6"""
        assert check_relations(build_gamma(3).scaled(2.0)) >= 6.0


class TestSymbol:
    """Test the Hermitian Dirac symbol i gamma . xi"""

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_symbol_squares_to_length(self, m):
        """Test (i gamma . xi)^2 = |xi|^2 I over random unit vectors"""
        gamma = build_gamma(m)
        rng = np.random.default_rng(7)
        identity = np.eye(gamma.spinor_dim)
        for _ in range(100):
            xi = rng.standard_normal(m)
            xi /= np.linalg.norm(xi)
            symbol = gamma.symbol(xi)
            assert np.max(np.abs(symbol @ symbol - identity)) < 1e-13

    def test_symbol_spectrum(self):
        """Test eigenvalues +-|xi|, each with multiplicity N / 2"""
        gamma = build_gamma(4)
        xi = np.array([0.3, -1.2, 0.5, 2.0])
        symbol = gamma.symbol(xi)
        assert np.allclose(symbol, symbol.conj().T)
        eigenvalues = np.linalg.eigvalsh(symbol)
        length = np.linalg.norm(xi)
        assert np.allclose(eigenvalues, [-length, -length, length, length], atol=1e-13)

    def test_symbol_broadcasts(self):
        """Test that leading axes of xi are kept"""
        gamma = build_gamma(3)
        assert gamma.symbol(np.zeros((4, 5, 3))).shape == (4, 5, 2, 2)

    def test_symbol_rejects_wrong_length(self):
        """Test that xi must have m components"""
        with pytest.raises(ConfigurationError):
            build_gamma(3).symbol([1.0, 0.0])
