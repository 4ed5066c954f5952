"""Tests for the validated parameter and geometry models."""

import numpy as np
import pytest
from pydantic import ValidationError

from vfrac.models import (
    MIXED_LIMIT,
    Interval,
    LimitConfig,
    LinearMap,
    ParameterSet,
    Point,
    QuadratureConfig,
    Region2D,
    VJacobian,
)


class TestParameterSet:
    def test_defaults(self):
        params = ParameterSet()
        assert params.gamma_p == 1
        assert params.trunc_i == 2
        assert params.alpha == 0.5
        assert params.is_real

    def test_step_constraint_message(self):
        with pytest.raises(ValidationError, match=r"Re\(gamma\)\+p >= q violated"):
            ParameterSet(gamma_p=0.5, p_step=0.5, q_step=2.0)

    @pytest.mark.parametrize("field", ["gamma_p", "beta_p", "rho_p", "delta_p"])
    def test_real_parts_must_be_positive(self, field):
        with pytest.raises(ValidationError, match="> 0 violated"):
            ParameterSet(**{field: -1 + 1j})

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(ValidationError):
            ParameterSet(alpha=alpha)

    def test_alpha_one_allowed(self):
        assert ParameterSet(alpha=1.0).alpha == 1.0

    def test_complex_from_string(self):
        params = ParameterSet(gamma_p="1+0.5j")
        assert params.gamma_p == 1 + 0.5j
        assert not params.is_real

    def test_with_helpers_keep_other_fields(self):
        params = ParameterSet.real(gamma=0.8, beta=1.5, rho=2.0, delta=1.2, p=1.0, q=1.5, alpha=0.5)
        moved = params.with_alpha(0.25).with_trunc(4)
        assert moved.alpha == 0.25
        assert moved.trunc_i == 4
        assert moved.beta_p == params.beta_p
        assert params.alpha == 0.5

    def test_frozen(self):
        with pytest.raises(ValidationError):
            ParameterSet().alpha = 0.3

    def test_describe(self):
        echo = ParameterSet(gamma_p=1 + 0.5j).describe()
        assert echo["gamma"] == "(1+0.5j)"
        assert echo["beta"] == 1.0
        assert echo["trunc_i"] == 2


class TestConfigs:
    def test_ladder_is_geometric(self):
        ladder = LimitConfig(eps_base=1e-2, eps_levels=4).ladder()
        assert np.allclose(ladder, [1e-2, 5e-3, 2.5e-3, 1.25e-3])

    def test_effective_order_capped_by_levels(self):
        assert LimitConfig(eps_levels=3, richardson_order=4).effective_order == 1
        assert LimitConfig().effective_order == 4

    def test_eps_base_bound(self):
        with pytest.raises(ValidationError):
            LimitConfig(eps_base=0.1)

    def test_deepened(self):
        assert MIXED_LIMIT.deepened(2).eps_levels == MIXED_LIMIT.eps_levels + 2

    def test_quadrature_bounds(self):
        with pytest.raises(ValidationError):
            QuadratureConfig(abs_tol=1e-16)
        with pytest.raises(ValidationError):
            QuadratureConfig(nodes_per_panel=7)

    def test_split_respects_floor(self):
        cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-10).split(2)
        assert cfg.abs_tol == 1e-14
        assert cfg.rel_tol == 5e-11


class TestGeometry:
    def test_interval_order(self):
        with pytest.raises(ValidationError):
            Interval(lo=2.0, hi=1.0)
        assert Interval(lo=1.0, hi=3.0).width == 2.0

    def test_region_in_positive_quadrant(self):
        with pytest.raises(ValidationError):
            Region2D.from_bounds(0.0, 1.0, 1.0, 2.0)

    def test_region_split(self):
        left, right = Region2D.from_bounds(1.0, 3.0, 1.0, 2.0).split_x(2.0)
        assert left.x_iv.hi == right.x_iv.lo == 2.0

    def test_point(self):
        a = Point.of(1, 2.5)
        assert a.dim == 2
        assert a.is_positive
        assert not Point.of(1.0, -1.0).is_positive
        with pytest.raises(ValidationError):
            Point.of(float("nan"))

    def test_vjacobian_shape_checked(self):
        base = Point.of(1.0, 2.0)
        jac = VJacobian.from_array(np.array([[1.0, 2.0]]), base=base, params=ParameterSet())
        assert jac.shape == (1, 2)
        assert isinstance(jac.as_linear_map(), LinearMap)
        with pytest.raises(ValidationError):
            VJacobian.from_array(np.array([[1.0, 2.0, 3.0]]), base=base, params=ParameterSet())

    def test_linear_map_apply(self):
        L = LinearMap.from_array(np.array([[1.0, 2.0], [0.0, 1.0]]))
        assert np.allclose(L.apply(np.array([1.0, 1.0])), [3.0, 1.0])
