import math

import numpy as np
import pytest

from critical.choices import CriticalKind
from critical.config import SolveConfig
from critical.solvers import (
    NEHARI_TOLERANCE,
    CriticalPoint,
    Sweep,
    branch_amplitude,
    branch_point,
    branch_value,
    certify_rim,
    coercivity_spot_check,
    constant_branch,
    dual_fountain_sequence,
    find_e,
    fountain_sequence,
    global_minimize,
    mountain_pass,
    rim_estimate,
    weak_form_defect,
)
from dirac.galerkin import SubspaceProjector
from energy.functional import Energy
from lattice.fields import SpinorField, random_field
from shared.exceptions import ClassificationError, ConfigurationError
from tests.factories import NonlinearityFactory

BRANCH_VALUE = math.pi**4 / 4


@pytest.fixture
def solve_config():
    return SolveConfig(restarts=1, max_iter=2000, galerkin_k=12)


class TestSolveConfig:
    """Test critical-point solver settings"""

    def test_defaults_from_settings(self, settings):
        """Test that path and tolerance defaults come from PDIRAC"""
        config = SolveConfig()
        assert config.path_points == settings.PDIRAC["PATH_POINTS"]
        assert config.galerkin_k == settings.PDIRAC["GALERKIN_K"]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"path_points": 4},
            {"tol": 0.0},
            {"galerkin_k": 0},
            {"rim_radius": -1.0},
            {"rim_samples": 8},
            {"max_doublings": 0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        """Test validation of the solver settings"""
        with pytest.raises(ConfigurationError):
            SolveConfig(**kwargs)


class TestConstantBranch:
    """Test the closed-form single-mode solutions"""

    def test_constant_branch(self, superlinear_energy):
        """Test A = pi and value pi^4 / 4 for p = 2, e = 4"""
        point = constant_branch(superlinear_energy)
        assert point.kind == CriticalKind.CONSTANT_BRANCH
        assert point.radius == pytest.approx(math.pi)
        assert point.value == pytest.approx(BRANCH_VALUE, rel=1e-12)
        assert point.grad_residual < 1e-8
        assert point.nehari_defect < 1e-6

    def test_higher_mode(self, superlinear_energy):
        """Test the mode (1, 0, 0) branch at |xi| = 3 pi"""
        point = branch_point(superlinear_energy, (1, 0, 0))
        assert point.kind == CriticalKind.BRANCH
        assert point.value == pytest.approx(81 * BRANCH_VALUE, rel=1e-10)
        assert branch_value(superlinear_energy, (1, 0, 0)) == pytest.approx(point.value)

    def test_any_unit_spinor(self, superlinear_energy):
        """Test that the branch value does not depend on the spinor"""
        point = constant_branch(superlinear_energy, spinor=[1.0, 1.0j])
        assert point.value == pytest.approx(BRANCH_VALUE, rel=1e-12)

    def test_sublinear_branch_is_negative(self, sublinear_energy):
        """Test c A^e (1/p - 1/e) < 0 when e < p"""
        assert constant_branch(sublinear_energy).value < 0

    def test_no_branch_when_e_equals_p(self, dirac_x):
        """Test that e = p has no single-mode branch"""
        energy = Energy(dirac_x, 2.0, NonlinearityFactory(e=2.0))
        with pytest.raises(ClassificationError):
            branch_amplitude(energy, math.pi)

    def test_bad_spinor(self, superlinear_energy):
        """Test spinor validation"""
        with pytest.raises(ConfigurationError):
            constant_branch(superlinear_energy, spinor=[0.0, 0.0])
        with pytest.raises(ConfigurationError):
            branch_point(superlinear_energy, (1, 0))


class TestRim:
    """Test rim estimates and the ray end"""

    def test_rim_positive_near_origin(self, superlinear_energy):
        """Test rho(r) > 0 for small r when H is superquadratic"""
        assert rim_estimate(superlinear_energy, 0.1) > 0

    def test_rim_at_zero(self, superlinear_energy):
        """Test rho(0) = 0"""
        assert rim_estimate(superlinear_energy, 0.0) == 0.0

    def test_rim_needs_samples(self, superlinear_energy):
        """Test that fewer than 32 samples are refused"""
        with pytest.raises(ConfigurationError):
            rim_estimate(superlinear_energy, 0.1, samples=16)

    def test_certify_rim(self, superlinear_energy, solve_config):
        """Test that the certified radius carries a positive estimate"""
        r, rho = certify_rim(superlinear_energy, solve_config)
        assert r > 0
        assert rho == rim_estimate(superlinear_energy, r, solve_config.rim_samples)

    def test_find_e(self, superlinear_energy, model_x, gamma3):
        """Test L(e) <= 0 and ||De||_p > r"""
        direction = random_field(model_x, gamma3, 3)
        end = find_e(superlinear_energy, direction, r=1.0)
        assert superlinear_energy.value(end) <= 0
        assert superlinear_energy.dirac.sobolev_norm(end, 2.0) > 1.0

    def test_find_e_needs_growth(self, sublinear_energy, model_x, gamma3):
        """Test ClassificationError without superquadratic growth"""
        with pytest.raises(ClassificationError):
            find_e(sublinear_energy, random_field(model_x, gamma3, 3), r=1.0)

    def test_find_e_zero_direction(self, superlinear_energy):
        """Test that a zero direction is refused"""
        zero = np.zeros(superlinear_energy.dirac.field_shape, dtype=np.complex128)
        with pytest.raises(ConfigurationError):
            find_e(superlinear_energy, zero, r=1.0)


class TestMountainPass:
    """Test the mountain-pass solver"""

    def test_seeded_at_branch(self, superlinear_energy, solve_config):
        """Test that the branch direction returns pi^4 / 4"""
        direction = constant_branch(superlinear_energy).field
        point = mountain_pass(superlinear_energy, solve_config, direction)
        assert point.kind == CriticalKind.MOUNTAIN_PASS
        assert point.value == pytest.approx(BRANCH_VALUE, rel=1e-6)
        assert point.grad_residual <= solve_config.tol

    @pytest.mark.slow
    def test_random_start(self, superlinear_energy, solve_config):
        """Test a converged positive critical value from a random direction"""
        point = mountain_pass(superlinear_energy, solve_config.replace(max_iter=20000))
        assert point.value > 0
        assert point.grad_residual <= solve_config.tol
        assert weak_form_defect(superlinear_energy, point.field) < 1e-4

    def test_point_tops_its_segment_path(self, superlinear_energy, solve_config):
        """Test the returned point is the highest node of the path from 0 to e"""
        direction = constant_branch(superlinear_energy).field
        point = mountain_pass(superlinear_energy, solve_config, direction)
        ts = np.linspace(0.0, 2.0, 81)
        profile = superlinear_energy.ray_profile(point.field, ts)
        assert profile[0] == 0.0
        assert profile[-1] < 0
        assert int(np.argmax(profile)) == 40
        assert point.value == pytest.approx(profile.max(), rel=1e-12)
        assert point.rim <= point.value

    def test_refuses_sublinear(self, sublinear_energy):
        """Test ClassificationError outside the superlinear regime"""
        with pytest.raises(ClassificationError, match="mountain_pass"):
            mountain_pass(sublinear_energy)


class TestGlobalMinimize:
    """Test the sublinear global minimizer"""

    def test_below_branch(self, sublinear_energy, solve_config):
        """Test a negative minimum no higher than the constant branch"""
        point = global_minimize(sublinear_energy, solve_config)
        branch = constant_branch(sublinear_energy)
        assert point.kind == CriticalKind.MINIMIZER
        assert point.value < 0
        assert point.value <= branch.value + 1e-8

    def test_coercive(self, sublinear_energy):
        """Test the ray profile check on a coercive energy"""
        assert coercivity_spot_check(sublinear_energy)

    def test_refuses_superlinear(self, superlinear_energy):
        """Test ClassificationError without Hi"""
        with pytest.raises(ClassificationError):
            global_minimize(superlinear_energy)


def level_point(energy, value, level, kind=CriticalKind.FOUNTAIN):
    zero = np.zeros(energy.dirac.field_shape, dtype=np.complex128)
    return CriticalPoint(
        field=SpinorField(energy.model, zero),
        value=value,
        grad_residual=0.0,
        kind=kind,
        iterations=1,
        level=level,
    )


class TestSweeps:
    """Test the fountain and dual fountain sweeps"""

    @pytest.mark.slow
    def test_fountain_levels(self, superlinear_energy, solve_config, dirac_x):
        """Test climbing positive values found by real descents below each branch bound"""
        sweep = fountain_sequence(superlinear_energy, solve_config, kmax=3)
        assert len(sweep) == 3
        assert [point.k for point in sweep] == [1, 2, 3]
        assert sweep.values == sorted(sweep.values)
        assert sweep.trend_holds
        modes = dirac_x.eigenbasis(2 * solve_config.galerkin_k).modes
        for point in sweep.levels:
            assert point.iterations > 0
            assert point.value > 0
            assert point.grad_residual <= solve_config.tol
            bound = branch_value(superlinear_energy, modes[2 * (point.level - 1)])
            assert point.value <= bound * (1 + 1e-6)
        for point in sweep:
            assert superlinear_energy.value(-point.field) == point.value

    @pytest.mark.slow
    def test_first_level_is_mountain_pass(self, superlinear_energy, solve_config, dirac_x):
        """Test that kmax = 1 is the mountain pass on the full Galerkin space"""
        sweep = fountain_sequence(superlinear_energy, solve_config, kmax=1)
        projector = SubspaceProjector.span(dirac_x, 2 * solve_config.galerkin_k)
        point = mountain_pass(
            superlinear_energy, solve_config, projector=projector, seed=solve_config.seed + 1
        )
        assert sweep.values == pytest.approx([point.value], rel=1e-8)

    @pytest.mark.slow
    def test_dual_fountain_levels(self, sublinear_energy, solve_config):
        """Test negative values increasing toward 0 from real minimizations"""
        sweep = dual_fountain_sequence(sublinear_energy, solve_config, kmax=3)
        assert len(sweep) == 3
        assert sweep.trend_holds
        assert sweep.values == sorted(sweep.values)
        assert all(value < 0 for value in sweep.values)
        assert all(point.iterations > 0 for point in sweep.levels)
        assert sweep.levels[0].value <= constant_branch(sublinear_energy).value * (1 - 1e-8)

    def test_trend_follows_level_order(self, superlinear_energy):
        """Test that a level value below its predecessor breaks the trend"""
        rising = [level_point(superlinear_energy, 1.0, 1), level_point(superlinear_energy, 2.0, 2)]
        falling = [level_point(superlinear_energy, 2.0, 1), level_point(superlinear_energy, 1.0, 2)]
        assert Sweep(CriticalKind.FOUNTAIN, rising, levels=rising).trend_holds
        assert not Sweep(CriticalKind.FOUNTAIN, falling, levels=falling).trend_holds
        assert not Sweep(CriticalKind.FOUNTAIN, [], levels=[]).trend_holds

    def test_dual_trend_needs_negative_values(self, sublinear_energy):
        """Test the sign condition of the dual trend"""
        kind = CriticalKind.DUAL_FOUNTAIN
        negative = [level_point(sublinear_energy, v, k, kind) for k, v in ((1, -2.0), (2, -1.0))]
        positive = [level_point(sublinear_energy, v, k, kind) for k, v in ((1, -1.0), (2, 1.0))]
        assert Sweep(kind, negative, levels=negative).trend_holds
        assert not Sweep(kind, positive, levels=positive).trend_holds

    def test_fountain_needs_superlinear(self, sublinear_energy, solve_config):
        """Test the fountain preconditions"""
        with pytest.raises(ClassificationError):
            fountain_sequence(sublinear_energy, solve_config, kmax=2)

    def test_rejects_kmax(self, sublinear_energy, solve_config):
        """Test kmax >= 1"""
        with pytest.raises(ConfigurationError):
            dual_fountain_sequence(sublinear_energy, solve_config, kmax=0)


class TestSymmetry:
    """Test that negation maps critical points to critical points"""

    def test_negated_branch(self, superlinear_energy, solve_config):
        """Test -psi keeps the value and passes acceptance"""
        point = constant_branch(superlinear_energy)
        negated = -point.field
        assert superlinear_energy.value(negated) == point.value
        assert superlinear_energy.residual_norm(negated) == point.grad_residual
        assert superlinear_energy.residual_norm(negated) <= solve_config.tol
        assert superlinear_energy.nehari_defect(negated) <= NEHARI_TOLERANCE

    def test_negated_mountain_pass(self, superlinear_energy, solve_config):
        """Test the mountain pass from -psi lands on the same value"""
        direction = constant_branch(superlinear_energy).field
        point = mountain_pass(superlinear_energy, solve_config, direction)
        opposite = mountain_pass(superlinear_energy, solve_config, -direction)
        assert opposite.value == pytest.approx(point.value, rel=1e-12)
        assert np.allclose(opposite.field.values, -point.field.values)
        assert weak_form_defect(superlinear_energy, opposite.field) < 1e-6


class TestWeakFormDefect:
    """Test the weak-form defect of candidate solutions"""

    def test_branch_is_weak_solution(self, superlinear_energy):
        """Test a vanishing defect at the constant branch"""
        point = constant_branch(superlinear_energy)
        assert weak_form_defect(superlinear_energy, point.field) < 1e-8

    def test_random_field_is_not(self, superlinear_energy, model_x, gamma3):
        """Test a visible defect away from solutions"""
        f = random_field(model_x, gamma3, 5)
        assert weak_form_defect(superlinear_energy, f) > 1e-3
