"""Tests for adaptive and weighted quadrature."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfrac.errors import DomainError, NonConvergence
from vfrac.models import Interval, QuadratureConfig, Region2D
from vfrac.quadrature import (
    double_integral_rect,
    integrate_adaptive,
    integrate_detailed,
    integrate_weighted,
    weighted_detailed,
)
from vfrac.registry import resolve_field, resolve_scalar


class TestAdaptive:
    def test_polynomial(self):
        assert integrate_adaptive(lambda x: x**2, Interval(lo=0.0, hi=3.0)) == pytest.approx(9.0)

    def test_detailed_reports_work(self):
        res = integrate_detailed(np.sin, 0.0, math.pi, QuadratureConfig())
        assert res.value == pytest.approx(2.0, abs=1e-10)
        assert res.evaluations > 0
        assert res.panels >= 1
        assert res.error < 1e-9

    def test_gk21_panels(self):
        cfg = QuadratureConfig(nodes_per_panel=21)
        assert integrate_adaptive(np.exp, Interval(lo=0.0, hi=1.0), cfg) == pytest.approx(
            math.e - 1.0, rel=1e-12
        )

    def test_budget_exhaustion_raises(self):
        cfg = QuadratureConfig(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=2)
        with pytest.raises(NonConvergence):
            integrate_adaptive(lambda x: np.sin(1.0 / x), Interval(lo=1e-3, hi=1.0), cfg)

    @given(
        a=st.floats(min_value=0.1, max_value=1.0),
        b=st.floats(min_value=1.1, max_value=2.0),
        c=st.floats(min_value=2.1, max_value=3.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_additivity(self, a, b, c):
        g = resolve_scalar("exp")
        whole = integrate_adaptive(g, Interval(lo=a, hi=c))
        parts = integrate_adaptive(g, Interval(lo=a, hi=b)) + integrate_adaptive(
            g, Interval(lo=b, hi=c)
        )
        assert whole == pytest.approx(parts, rel=1e-9)


class TestWeighted:
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
    def test_power_from_zero(self, alpha):
        # integral of x^2 x^(alpha-1) on [0, 2] is 2^(alpha+2)/(alpha+2)
        f = resolve_scalar("poly:0,0,1")
        expected = 2.0 ** (alpha + 2) / (alpha + 2)
        assert integrate_weighted(f, Interval(lo=0.0, hi=2.0), alpha) == pytest.approx(
            expected, rel=1e-10
        )

    @pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
    def test_against_mpmath(self, alpha):
        expected = float(mpmath.quad(lambda x: mpmath.sin(x) * x ** (alpha - 1), [0, 1.5]))
        got = integrate_weighted(np.sin, Interval(lo=0.0, hi=1.5), alpha)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_substitution_matches_direct(self):
        iv = Interval(lo=0.5, hi=2.0)
        alpha = 0.4
        direct = integrate_adaptive(lambda x: np.log(x) * x ** (alpha - 1.0), iv)
        assert integrate_weighted(np.log, iv, alpha) == pytest.approx(direct, rel=1e-9)

    def test_negative_lower_limit(self):
        with pytest.raises(DomainError):
            weighted_detailed(np.exp, Interval(lo=-1.0, hi=1.0), 0.5)

    def test_alpha_range(self):
        with pytest.raises(DomainError):
            weighted_detailed(np.exp, Interval(lo=0.0, hi=1.0), 1.5)

    def test_parallel_workers(self):
        iv = Interval(lo=0.0, hi=1.5)
        serial = integrate_weighted(np.sin, iv, 0.6)
        parallel = integrate_weighted(np.sin, iv, 0.6, QuadratureConfig(workers=2))
        assert parallel == pytest.approx(serial, rel=1e-9)


class TestDoubleIntegral:
    def test_product_field(self):
        region = Region2D.from_bounds(1.0, 2.0, 1.0, 3.0)
        # integral of x y over [1,2]x[1,3] = 1.5 * 4
        assert double_integral_rect(lambda x, y: x * y, region) == pytest.approx(6.0, rel=1e-10)

    def test_accepts_vector_map(self):
        region = Region2D.from_bounds(1.0, 2.0, 1.0, 3.0)
        field = resolve_field("poly2:xy")
        assert double_integral_rect(field, region) == pytest.approx(6.0, rel=1e-10)

    def test_interval_pair(self):
        rect = (Interval(lo=0.0, hi=1.0), Interval(lo=0.0, hi=2.0))
        assert double_integral_rect(lambda x, y: 1.0, rect) == pytest.approx(2.0)

    def test_parallel_workers(self):
        region = Region2D.from_bounds(0.5, 2.0, 1.0, 3.0)
        field = resolve_field("sincos")
        serial = double_integral_rect(field, region)
        parallel = double_integral_rect(field, region, QuadratureConfig(workers=3))
        assert parallel == pytest.approx(serial, rel=1e-8, abs=1e-10)
