"""Tests for V-fractional partials and Jacobians of maps R^n -> R^m."""

import math

import numpy as np
import pytest

from vfrac.errors import DomainError
from vfrac.maps import VectorMap, stack
from vfrac.models import MixedOrders, ParameterSet, Point, VJacobian
from vfrac.multivariable import (
    chain_rule_multi,
    classical_jacobian,
    componentwise_check,
    jacobian_matrix,
    linear_map_residual,
    multivariable_linearity_residual,
    multivariable_product_residual,
    probe_vector,
    residual_decay_slope,
    v_gradient,
    v_jacobian,
    v_partial,
)
from vfrac.registry import resolve, resolve_field, resolve_scalar
from vfrac.scalar_calculus import v_derivative_limit
from vfrac.special_functions import coefficient_c

DRAW = ParameterSet.real(gamma=0.8, beta=1.5, rho=2.0, delta=1.2, p=1.0, q=1.5, alpha=0.5)


def pair_map() -> VectorMap:
    def fn(x):
        return np.array([x[0] * x[1], x[0] + x[1]])

    def jac(x):
        return np.array([[x[1], x[0]], [1.0, 1.0]])

    return VectorMap(fn=fn, n_in=2, n_out=2, name="(xy, x+y)", jacobian=jac)


def outer_map() -> VectorMap:
    def fn(u):
        return np.sin(u[0]) + u[1] ** 2

    def jac(u):
        return np.array([[np.cos(u[0]), 2.0 * u[1]]])

    return VectorMap(fn=fn, n_in=2, n_out=1, name="sin(u)+v^2", jacobian=jac)


def factor(a, params):
    c = coefficient_c(params).real
    return np.diag([c * ap ** (1.0 - params.alpha) for ap in a])


class TestPartials:
    def test_sin_example(self):
        # d/dx of sin(x) cos(y) scaled by C x^(1-alpha)
        a = (0.5, 1.5)
        value = v_partial(resolve_field("sincos"), a, 1, DRAW)
        c = coefficient_c(DRAW).real
        expected = c * a[0] ** 0.5 * math.cos(a[0]) * math.cos(a[1])
        assert value == pytest.approx(expected, rel=1e-8)

    def test_exp_example(self):
        a = 1.2
        value = v_partial(resolve("exp", 1), [a], 1, DRAW)
        c = coefficient_c(DRAW).real
        assert value == pytest.approx(c * a**0.5 * math.exp(a), rel=1e-8)

    def test_scalar_consistency(self):
        one_d = v_partial(resolve("sin", 1), [0.9], 1, DRAW)
        assert one_d == pytest.approx(v_derivative_limit(resolve_scalar("sin"), 0.9, DRAW))

    def test_axis_out_of_range(self):
        with pytest.raises(ValueError):
            v_partial(resolve_field("sincos"), (1.0, 1.0), 3, DRAW)

    def test_vector_output_rejected(self):
        with pytest.raises(ValueError):
            v_partial(pair_map(), (1.0, 1.0), 1, DRAW)

    def test_gradient_uses_each_order(self):
        f = resolve_field("poly2:xy")
        dt, ds = v_gradient(f, (2.0, 3.0), (0.5, 0.25))
        # unit parameters: C = 1
        assert dt == pytest.approx(2.0**0.5 * 3.0, rel=1e-8)
        assert ds == pytest.approx(3.0**0.75 * 2.0, rel=1e-8)

    def test_gradient_needs_two_coordinates(self):
        with pytest.raises(ValueError):
            v_gradient(resolve("sin", 1), (1.0,), MixedOrders(alpha=0.5, kappa=0.5))


class TestJacobian:
    @pytest.mark.parametrize(
        "fmap,a",
        [
            (pair_map(), (1.0, 2.0)),
            (resolve_field("sincos"), (0.5, 1.5)),
            (stack([resolve_field("expsum:0.5"), resolve_field("poly2:x2y")]), (0.7, 1.3)),
        ],
    )
    def test_factorization(self, fmap, a):
        got = jacobian_matrix(fmap, a, DRAW)
        expected = classical_jacobian(fmap, a) @ factor(a, DRAW)
        assert np.allclose(got, expected, rtol=1e-6, atol=1e-9)

    def test_three_inputs(self):
        def fn(x):
            return np.array([np.log(x[0]) + x[1] * x[2], x[0] * x[1] ** 2])

        fmap = VectorMap(fn=fn, n_in=3, n_out=2)
        a = (1.0, 0.5, 2.0)
        got = jacobian_matrix(fmap, a, DRAW)
        assert got.shape == (2, 3)
        expected = classical_jacobian(fmap, a) @ factor(a, DRAW)
        assert np.allclose(got, expected, rtol=1e-6, atol=1e-9)

    def test_v_jacobian_model(self):
        jac = v_jacobian(pair_map(), (1.0, 2.0), DRAW)
        assert isinstance(jac, VJacobian)
        assert jac.shape == (2, 2)
        assert jac.base == Point.of(1.0, 2.0)

    def test_rows_match_components(self):
        assert componentwise_check(pair_map(), (1.0, 2.0), DRAW) < 1e-12

    def test_non_positive_base(self):
        with pytest.raises(DomainError):
            jacobian_matrix(pair_map(), (1.0, 0.0), DRAW)

    def test_classical_matches_analytic(self):
        fmap = pair_map()
        a = np.array([1.5, 0.5])
        assert np.allclose(classical_jacobian(fmap, a), fmap.analytic_jacobian(a), atol=1e-8)


class TestLinearMapResidual:
    def test_probe_vector_coordinates(self):
        a = (1.0, 4.0)
        probe = probe_vector(a, (0.0, 0.0), DRAW)
        assert np.array_equal(probe, np.array(a))

    def test_residual_decays_linearly(self):
        f, a = resolve_field("sincos"), (0.5, 1.5)
        L = v_jacobian(f, a, DRAW)
        slope, residuals = residual_decay_slope(f, a, L, DRAW)
        assert slope >= 0.9
        assert residuals[-1] < residuals[0]

    def test_perturbed_candidate_does_not_decay(self):
        f, a = resolve_field("sincos"), (0.5, 1.5)
        L = v_jacobian(f, a, DRAW).as_array() + 1e-3
        _, residuals = residual_decay_slope(f, a, L, DRAW)
        assert min(residuals[2:]) > 1e-3 / 2

    def test_zero_eps_rejected(self):
        f, a = resolve_field("sincos"), (0.5, 1.5)
        with pytest.raises(ValueError):
            linear_map_residual(f, a, np.zeros((1, 2)), DRAW, (0.0, 0.0))


class TestRules:
    def test_chain_rule(self):
        g, f = outer_map(), pair_map()
        a = (1.0, 0.5)

        def composite(x):
            return g(f(x))

        h = VectorMap(fn=composite, n_in=2, n_out=1)
        direct = jacobian_matrix(h, a, DRAW)
        via_chain = chain_rule_multi(g, f, a, DRAW).as_array()
        assert np.allclose(direct, via_chain, rtol=1e-6, atol=1e-9)

    def test_chain_rule_differentiates_outer_map_numerically(self):
        g, f = outer_map(), pair_map()
        bogus = VectorMap(fn=g.fn, n_in=2, n_out=1, jacobian=lambda u: np.zeros((1, 2)))
        a = (1.0, 0.5)
        expected = chain_rule_multi(g, f, a, DRAW).as_array()
        assert np.allclose(chain_rule_multi(bogus, f, a, DRAW).as_array(), expected)

    def test_chain_rule_needs_positive_inner_values(self):
        def fn(x):
            return np.array([x[0] - 5.0, x[1]])

        f = VectorMap(fn=fn, n_in=2, n_out=2)
        with pytest.raises(DomainError):
            chain_rule_multi(outer_map(), f, (1.0, 1.0), DRAW)

    def test_linearity(self):
        f, g = resolve_field("sincos"), resolve_field("poly2:x2y3")
        assert multivariable_linearity_residual(f, g, (0.8, 1.1), 2.0, -0.5, DRAW) < 1e-6

    def test_product(self):
        f, g = resolve_field("sincos"), resolve_field("expsum:0.5")
        assert multivariable_product_residual(f, g, (0.8, 1.1), DRAW) < 1e-6
