#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_quadrature.py
Tests for the intervals, tolerances and the adaptive integrator.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Beta"

# Default Libraries #
import math

# Downloaded Libraries #
import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Local Libraries #
import src.hhverify as hhverify


# Definitions #
# Functions #
def product_integral_oracle(function, a, b):
    """The product integral of a function at 40 digits."""
    with mpmath.workdps(40):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        raw = mpmath.quad(lambda x: function(x) * function(a * b / x) / x, [a, mpmath.sqrt(a * b), b])
        return float(raw / mpmath.log(b / a))


# Classes #
class TestInterval:
    """Tests the Interval record."""

    @pytest.mark.parametrize("a, b", [(1.0, 1.0), (2.0, 1.0), (0.0, 1.0), (-1.0, 1.0), (math.nan, 1.0),
                                      (1.0, math.inf)])
    def test_invalid(self, a, b):
        with pytest.raises(hhverify.DomainError):
            hhverify.Interval(a, b)

    def test_derived_quantities(self):
        interval = hhverify.Interval(1.0, 4.0)
        assert interval.width == 3.0
        assert interval.geometric_midpoint == 2.0
        assert interval.log_ratio == pytest.approx(math.log(4.0), rel=1e-15)
        assert interval.as_mean_pair() == hhverify.MeanPair(1.0, 4.0)

    def test_coerce(self):
        assert hhverify.Interval.coerce((0.25, 0.75)) == hhverify.Interval(0.25, 0.75)

    def test_nearby_log_ratio(self):
        interval = hhverify.Interval(1.0, 1.0 + 1e-12)
        assert interval.log_ratio == pytest.approx(1e-12, rel=1e-3)


class TestTolerances:
    """Tests the tolerance record and its environment overrides."""

    @pytest.mark.parametrize("rel, abs_", [(0.0, 1e-12), (1e-10, -1.0), (math.nan, 1e-12), (1e-10, math.inf)])
    def test_invalid(self, rel, abs_):
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.Tolerances(rel, abs_)

    def test_defaults(self):
        tol = hhverify.Tolerances.from_environment({})
        assert (tol.rel, tol.abs) == (1e-10, 1e-12)

    def test_environment(self):
        tol = hhverify.Tolerances.from_environment({"HHVERIFY_REL_TOL": "1e-8", "HHVERIFY_ABS_TOL": "1e-9"})
        assert (tol.rel, tol.abs) == (1e-8, 1e-9)

    def test_explicit_overrides_environment(self):
        tol = hhverify.Tolerances.from_environment({"HHVERIFY_REL_TOL": "1e-8"}, rel=1e-6)
        assert tol.rel == 1e-6

    @pytest.mark.parametrize("value", ["abc", "-1", "0"])
    def test_invalid_environment(self, value):
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.Tolerances.from_environment({"HHVERIFY_REL_TOL": value})

    def test_coerce(self):
        assert hhverify.Tolerances.coerce(None) == hhverify.Tolerances()
        scaled = hhverify.Tolerances.coerce(1e-8)
        assert scaled.rel == 1e-8
        assert scaled.abs == pytest.approx(1e-10)
        tol = hhverify.Tolerances(1e-6, 1e-7)
        assert hhverify.Tolerances.coerce(tol) is tol


class TestIntegrate:
    """Tests the adaptive Gauss-Kronrod integrator."""

    def test_polynomial(self):
        result = hhverify.integrate(lambda x: x ** 3, (0.0, 2.0))
        assert result.converged
        assert result.value == pytest.approx(4.0, rel=1e-14)

    def test_exponential(self):
        result = hhverify.integrate(np.exp, (0.0, 1.0))
        assert result.value == pytest.approx(math.e - 1.0, rel=1e-13)
        assert result.error_estimate <= 1e-10 * result.value

    def test_endpoint_singularity(self):
        result = hhverify.integrate(np.sqrt, (0.0, 1.0))
        assert result.converged
        assert result.value == pytest.approx(2.0 / 3.0, rel=1e-9)

    def test_scalar_integrand(self):
        result = hhverify.integrate(lambda x: math.cos(x), (0.0, 1.0))
        assert result.value == pytest.approx(math.sin(1.0), rel=1e-13)

    def test_constant_broadcast(self):
        result = hhverify.integrate(lambda x: 2.0, (1.0, 3.0))
        assert result.value == pytest.approx(4.0, rel=1e-14)

    def test_not_finite(self):
        with pytest.raises(hhverify.IntegrandError):
            hhverify.integrate(lambda x: 1.0 / (x - 0.5), (0.0, 1.0))

    def test_no_convergence(self):
        result = hhverify.integrate(lambda x: np.sin(1.0 / x), (1e-4, 1.0), max_panels=4)
        assert not result.converged
        assert math.isfinite(result.value)
        assert result.error_estimate > result.tolerance

    @pytest.mark.parametrize("bounds", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf)])
    def test_invalid_bounds(self, bounds):
        with pytest.raises(hhverify.DomainError):
            hhverify.integrate(np.exp, bounds)

    def test_reproducible(self):
        first = hhverify.integrate(lambda x: np.sin(1.0 / x), (1e-2, 1.0))
        second = hhverify.integrate(lambda x: np.sin(1.0 / x), (1e-2, 1.0))
        assert first == second

    @settings(max_examples=50, deadline=None)
    @given(a=st.floats(min_value=-3.0, max_value=0.0), split=st.floats(min_value=0.05, max_value=0.95),
           width=st.floats(min_value=0.1, max_value=5.0))
    def test_additivity(self, a, split, width):
        b = a + split * width
        c = a + width
        whole = hhverify.integrate(np.exp, (a, c)).value
        parts = hhverify.integrate(np.exp, (a, b)).value + hhverify.integrate(np.exp, (b, c)).value
        assert whole == pytest.approx(parts, rel=1e-10)


class TestProductIntegral:
    """Tests the normalized product integral and its halves."""

    def test_constant(self):
        result = hhverify.product_integral(hhverify.make_spec("constant", c=2.0), (0.5, 2.0))
        assert result.value == pytest.approx(4.0, rel=1e-13)

    @pytest.mark.parametrize("c", [-1.0, 0.5, 1.0, 2.0])
    def test_power_is_sharp(self, c):
        a, b = 1.0, 4.0
        result = hhverify.product_integral(hhverify.make_spec("power", c=c), (a, b))
        assert result.value == pytest.approx((a * b) ** c, rel=1e-12)

    @pytest.mark.parametrize("a, b", [(0.5, 2.0), (1.0, 4.0), (0.25, 0.75)])
    def test_exponential_oracle(self, a, b):
        result = hhverify.product_integral(hhverify.make_spec("exponential"), (a, b))
        assert result.converged
        assert result.value == pytest.approx(product_integral_oracle(mpmath.exp, a, b), rel=1e-10)

    @pytest.mark.parametrize("s", [0.3, 0.5, 0.7])
    def test_power_shift_oracle(self, s):
        spec = hhverify.make_spec("power_shift", s=s)
        result = hhverify.product_integral(spec, (0.25, 0.75))

        def function(x):
            return x ** s / s + 1

        assert result.value == pytest.approx(product_integral_oracle(function, 0.25, 0.75), rel=1e-10)

    def test_outside_domain(self):
        with pytest.raises(hhverify.DomainError):
            hhverify.product_integral(hhverify.make_spec("power_shift", s=0.5), (0.5, 2.0))

    @pytest.mark.parametrize("text", ["exponential", "power:c=2.0", "power_shift:s=0.4"])
    def test_half_symmetry(self, text):
        assert hhverify.half_integral_symmetry_check(hhverify.parse_function_spec(text), (0.25, 0.75))

    def test_halves_sum(self):
        spec = hhverify.make_spec("exponential")
        interval = hhverify.Interval(0.5, 2.0)
        left, right = hhverify.half_integrals(spec, interval)
        whole = hhverify.product_integral(spec, interval).value * interval.log_ratio
        assert left.value + right.value == pytest.approx(whole, rel=1e-10)
