"""Tests for function selectors."""

import math

import numpy as np
import pytest

from vfrac.registry import (
    SelectorError,
    parse_poly2,
    registry_help,
    resolve,
    resolve_field,
    resolve_field_entry,
    resolve_scalar,
)


class TestScalarSelectors:
    @pytest.mark.parametrize(
        "selector,t,value,slope",
        [
            ("sin", 1.0, math.sin(1.0), math.cos(1.0)),
            ("cos", 1.0, math.cos(1.0), -math.sin(1.0)),
            ("exp", 0.5, math.exp(0.5), math.exp(0.5)),
            ("ln", 2.0, math.log(2.0), 0.5),
            ("LOG", 2.0, math.log(2.0), 0.5),
            ("id", 3.0, 3.0, 1.0),
            ("poly:1,-2,0,1", 2.0, 5.0, 10.0),
            ("expsum:0.5", 2.0, math.e, 0.5 * math.e),
            ("pow:1.5", 4.0, 8.0, 3.0),
            ("const:-2.5", 7.0, -2.5, 0.0),
        ],
    )
    def test_value_and_derivative(self, selector, t, value, slope):
        f = resolve_scalar(selector)
        assert f(t) == pytest.approx(value)
        assert f.prime()(t) == pytest.approx(slope)

    def test_composition_is_right_associative(self):
        f = resolve_scalar("sin@exp@ln")
        t = 1.7
        assert f(t) == pytest.approx(math.sin(t))
        assert f.prime()(t) == pytest.approx(math.cos(t))

    def test_composition_name(self):
        assert resolve_scalar("sin@exp").name == "sin@exp"

    def test_complex_arguments(self):
        assert resolve_scalar("poly:0,0,1")(1j) == pytest.approx(-1.0)

    @pytest.mark.parametrize(
        "selector", ["", "tan", "poly:", "poly:1,,2", "pow:abc", "const:", "sin@", "sincos"]
    )
    def test_unknown_or_malformed(self, selector):
        with pytest.raises(SelectorError):
            resolve_scalar(selector)

    def test_selector_error_is_value_error(self):
        assert issubclass(SelectorError, ValueError)


class TestFieldSelectors:
    def test_poly2_terms(self):
        assert parse_poly2("xy + 2*x2 - y3", "poly2") == [(1.0, 1, 1), (2.0, 2, 0), (-1.0, 0, 3)]

    def test_poly2_constant_term(self):
        assert parse_poly2("3+x", "poly2") == [(3.0, 0, 0), (1.0, 1, 0)]

    @pytest.mark.parametrize("terms", ["", "x*z", "2**x", "xy+"])
    def test_poly2_malformed(self, terms):
        with pytest.raises(SelectorError):
            parse_poly2(terms, f"poly2:{terms}")

    def test_poly2_field(self):
        entry = resolve_field_entry("poly2:x2y3")
        point = np.array([2.0, 1.5])
        assert entry.map(point)[0] == pytest.approx(4.0 * 1.5**3)
        assert np.allclose(entry.map.analytic_jacobian(point), [[4.0 * 1.5**3, 3 * 4.0 * 1.5**2]])
        assert entry.mixed(2.0, 1.5) == pytest.approx(6 * 2.0 * 1.5**2)

    def test_expsum_field(self):
        entry = resolve_field_entry("expsum:0.5")
        assert entry.map(np.array([1.0, 1.0]))[0] == pytest.approx(math.e)
        assert entry.mixed(1.0, 1.0) == pytest.approx(0.25 * math.e)

    def test_sincos(self):
        entry = resolve_field_entry("sincos")
        assert entry.map(np.array([0.5, 1.5]))[0] == pytest.approx(math.sin(0.5) * math.cos(1.5))

    @pytest.mark.parametrize(
        "selector,expected", [("exp:x", math.exp(2.0)), ("ln:y", math.log(3.0))]
    )
    def test_scalar_on_axis(self, selector, expected):
        entry = resolve_field_entry(selector)
        assert entry.map(np.array([2.0, 3.0]))[0] == pytest.approx(expected)
        assert entry.mixed(2.0, 3.0) == 0.0

    def test_scalar_family_on_axis(self):
        f = resolve_field("expsum:0.5:x")
        assert f(np.array([2.0, 7.0]))[0] == pytest.approx(math.e)

    def test_const_field(self):
        assert resolve_field("const:4")(np.array([1.0, 2.0]))[0] == 4.0

    @pytest.mark.parametrize("selector", ["", "sin", "nope:x", "poly2:x*z", "expsum:a"])
    def test_unknown_fields(self, selector):
        with pytest.raises(SelectorError):
            resolve_field_entry(selector)


class TestResolve:
    def test_dimension_one_is_scalar(self):
        f = resolve("exp", 1)
        assert f.dims == (1, 1)
        assert np.allclose(f.analytic_jacobian(np.array([0.0])), [[1.0]])

    def test_dimension_two_is_field(self):
        assert resolve("sincos", 2).dims == (2, 1)

    def test_higher_dimensions_rejected(self):
        with pytest.raises(SelectorError):
            resolve("sin", 3)

    def test_help_mentions_families(self):
        text = registry_help()
        assert "poly:<...>" in text
        assert "poly2:<...>" in text
        assert "outer@inner" in text
