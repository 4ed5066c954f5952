"""Tests for log-gamma, Pochhammer symbols and the truncated series."""

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfrac.errors import PoleError, SeriesOverflowError
from vfrac.models import ParameterSet
from vfrac.special_functions import (
    coefficient_c,
    first_order_probe,
    h_coefficients,
    log_gamma,
    pochhammer_gen,
    probe_point,
    series_term,
    truncated_h,
    truncated_ml,
)

REAL_DRAW = ParameterSet.real(gamma=0.8, beta=1.5, rho=2.0, delta=1.2, p=1.0, q=1.5, alpha=0.5)
COMPLEX_DRAW = ParameterSet(gamma_p=1 + 0.5j, beta_p=1.2 - 0.3j, rho_p=0.9 + 0.2j, trunc_i=3)

# 25 real points spread geometrically over [0.1, 170], then 25 complex points.
ORACLE_POINTS = [0.1 * 1700.0 ** (k / 24) for k in range(25)] + [
    complex(0.5 * k, 0.3 * (k - 12)) for k in range(1, 26)
]


class TestLogGamma:
    @pytest.mark.parametrize("z", ORACLE_POINTS)
    def test_matches_mpmath(self, z):
        expected = complex(mpmath.loggamma(z))
        got = log_gamma(z)
        assert abs(got - expected) <= 1e-12 * max(1.0, abs(expected))

    def test_half(self):
        expected = 0.5 * math.log(math.pi)
        got = log_gamma(0.5)
        assert abs(got - expected) <= 1e-12 * abs(expected)
        assert got.imag == 0.0

    def test_small_integers(self):
        for n in range(1, 8):
            assert log_gamma(n).real == pytest.approx(math.lgamma(n), abs=1e-14)

    @pytest.mark.parametrize("z", [0, -1, -2, -7, -3 + 1e-14])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            log_gamma(z)

    def test_near_pole_is_finite(self):
        assert math.isfinite(log_gamma(-2.5).real)

    def test_non_finite_argument(self):
        with pytest.raises(ValueError):
            log_gamma(float("inf"))


class TestPochhammer:
    @given(
        x=st.floats(min_value=0.05, max_value=20.0),
        step=st.floats(min_value=0.05, max_value=5.0),
    )
    def test_k0_is_exactly_one(self, x, step):
        assert pochhammer_gen(x, step, 0) == 1

    def test_unit_step_is_rising_factorial(self):
        assert pochhammer_gen(3.0, 1.0, 4).real == pytest.approx(3 * 4 * 5 * 6, rel=1e-13)

    def test_fractional_step(self):
        expected = math.gamma(2.3 + 0.7 * 3) / math.gamma(2.3)
        assert pochhammer_gen(2.3, 0.7, 3).real == pytest.approx(expected, rel=1e-12)

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            pochhammer_gen(1.0, 1.0, -1)

    def test_overflow_is_reported(self):
        with pytest.raises(SeriesOverflowError):
            pochhammer_gen(1.0, 1.0, 400)


class TestTruncatedSeries:
    def test_z0_is_reciprocal_gamma_beta(self):
        params = ParameterSet(beta_p=2.0)
        assert truncated_ml(params, 0) == pytest.approx(1.0, abs=1e-15)

    def test_unit_parameters_give_exponential_partial_sums(self):
        params = ParameterSet.unit(trunc_i=6)
        expected = sum(0.7**k / math.factorial(k) for k in range(7))
        assert truncated_ml(params, 0.7).real == pytest.approx(expected, rel=1e-14)

    def test_matches_mpmath_series(self):
        p = REAL_DRAW.with_trunc(5)
        z = 1.3
        expected = mpmath.fsum(
            mpmath.rf(2.0, 1.5 * k)
            / mpmath.rf(1.2, 1.0 * k)
            * mpmath.power(z, k)
            / mpmath.gamma(0.8 * k + 1.5)
            for k in range(6)
        )
        assert truncated_ml(p, z).real == pytest.approx(float(expected), rel=1e-12)

    @given(
        z=st.floats(min_value=-5.0, max_value=5.0),
        n=st.integers(min_value=0, max_value=8),
    )
    @settings(max_examples=50)
    def test_truncation_consistency(self, z, n):
        upper = truncated_ml(REAL_DRAW.with_trunc(n + 1), z)
        lower = truncated_ml(REAL_DRAW.with_trunc(n), z)
        term = series_term(REAL_DRAW, z, n + 1)
        scale = max(1.0, abs(upper), abs(lower), abs(term))
        assert abs((upper - lower) - term) <= 1e-13 * scale

    def test_large_truncation_stays_finite(self):
        params = ParameterSet(
            gamma_p=5.0, beta_p=5.0, rho_p=5.0, delta_p=5.0, trunc_i=60
        )
        value = truncated_ml(params, 10.0)
        assert math.isfinite(value.real)

    def test_complex_parameters(self):
        value = truncated_ml(COMPLEX_DRAW, 0.5 + 0.25j)
        assert math.isfinite(value.real) and math.isfinite(value.imag)
        assert value.imag != 0


class TestKernel:
    @pytest.mark.parametrize("params", [ParameterSet(), REAL_DRAW, COMPLEX_DRAW])
    def test_h_at_zero_is_exactly_one(self, params):
        assert truncated_h(params, 0) == 1

    def test_h_is_gamma_beta_times_series(self):
        z = 0.4
        expected = math.gamma(1.5) * truncated_ml(REAL_DRAW, z).real
        assert truncated_h(REAL_DRAW, z).real == pytest.approx(expected, rel=1e-13)

    def test_linear_coefficient_is_c(self):
        coeffs = h_coefficients(REAL_DRAW)
        assert coeffs[0] == 1
        assert coeffs[1] == pytest.approx(coefficient_c(REAL_DRAW), rel=1e-13)

    def test_unit_c_is_one(self):
        assert coefficient_c(ParameterSet()) == pytest.approx(1.0, abs=1e-15)

    def test_c_closed_form(self):
        # (rho)_q = Gamma(rho + q) / Gamma(rho), (delta)_p = delta for p = 1
        expected = math.gamma(1.5) * (math.gamma(3.5) / math.gamma(2.0)) / (math.gamma(2.3) * 1.2)
        assert coefficient_c(REAL_DRAW).real == pytest.approx(expected, rel=1e-12)

    def test_conformable_kernel(self):
        params = ParameterSet.conformable(alpha=0.5)
        assert truncated_h(params, 0.3) == pytest.approx(1.3, rel=1e-15)
        assert coefficient_c(params) == pytest.approx(1.0)

    def test_probe_agrees_to_first_order(self):
        t, eps = 2.0, 1e-6
        exact = probe_point(t, eps, REAL_DRAW)
        linear = first_order_probe(t, eps, REAL_DRAW)
        assert abs(exact - linear) < 1e-10
