import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialweyl.quadrature import (
    QuadratureError,
    gauss_laguerre,
    gauss_legendre,
    integrate_adaptive,
    integrate_semi_infinite,
)


class TestGaussLegendre:
    def test_midpoint(self):
        rule = gauss_legendre(1, 0.0, 2.0)
        np.testing.assert_allclose(rule.nodes, [1.0])
        np.testing.assert_allclose(rule.weights, [2.0])

    def test_two_point(self):
        rule = gauss_legendre(2)
        np.testing.assert_allclose(rule.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
        np.testing.assert_allclose(rule.weights, [1.0, 1.0], rtol=1e-15)

    def test_t9_on_unit_interval(self):
        assert gauss_legendre(5, 0.0, 1.0).integrate(lambda t: t ** 9) == pytest.approx(0.1, abs=1e-13)

    def test_matches_numpy_reference(self):
        x, w = np.polynomial.legendre.leggauss(30)
        rule = gauss_legendre(30)
        np.testing.assert_allclose(rule.nodes, x, atol=1e-15)
        np.testing.assert_allclose(rule.weights, w, atol=1e-15)

    @given(st.integers(1, 60), st.floats(-5, 5), st.floats(0.1, 10))
    @settings(max_examples=50, deadline=None)
    def test_properties(self, n, a, length):
        rule = gauss_legendre(n, a, a + length)
        assert len(rule) == n
        assert np.all(rule.weights > 0)
        assert np.all((rule.nodes > a) & (rule.nodes < a + length))
        assert np.all(np.diff(rule.nodes) > 0)
        assert rule.weights.sum() == pytest.approx(length, rel=1e-13)
        assert rule.exactness_degree == 2 * n - 1

    @pytest.mark.parametrize("n", [3, 8, 17])
    def test_exactness_degree(self, n):
        rule = gauss_legendre(n)
        for k in range(2 * n):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert rule.integrate(lambda t: t ** k) == pytest.approx(exact, abs=1e-14)

    def test_invalid(self):
        with pytest.raises(ValueError):
            gauss_legendre(0)
        with pytest.raises(ValueError):
            gauss_legendre(3, 1.0, 1.0)


class TestGaussLaguerre:
    def test_first_moment(self):
        assert gauss_laguerre(2).integrate(lambda t: t) == pytest.approx(1.0, abs=1e-14)

    def test_fifteenth_moment(self):
        assert gauss_laguerre(20).integrate(lambda t: t ** 15) == pytest.approx(math.factorial(15), rel=1e-10)

    @pytest.mark.parametrize("n", [1, 5, 16, 40])
    def test_moments_up_to_exactness(self, n):
        rule = gauss_laguerre(n)
        for k in range(min(2 * n, 30)):
            assert rule.integrate(lambda t: t ** k) == pytest.approx(math.factorial(k), rel=1e-11)

    def test_matches_numpy_reference(self):
        x, w = np.polynomial.laguerre.laggauss(40)
        rule = gauss_laguerre(40)
        np.testing.assert_allclose(rule.nodes, x, rtol=1e-13)
        np.testing.assert_allclose(rule.weights, w, rtol=1e-10, atol=1e-300)

    @pytest.mark.parametrize("n", [8, 64, 128, 200])
    def test_weight_sums_and_scaled_weights(self, n):
        rule = gauss_laguerre(n)
        assert rule.weights.sum() == pytest.approx(1.0, rel=1e-13)
        assert np.all(rule.nodes > 0) and np.all(np.diff(rule.nodes) > 0)
        assert np.all(np.isfinite(rule.scaled_weights)) and np.all(rule.scaled_weights > 0)
        # exp(-t) integrated through the scaled weights recovers the moment 1.
        assert float(np.dot(rule.scaled_weights, np.exp(-rule.nodes))) == pytest.approx(1.0, rel=1e-13)

    def test_invalid(self):
        with pytest.raises(ValueError):
            gauss_laguerre(0)


class TestAdaptive:
    def test_exp(self):
        value, err = integrate_adaptive(lambda t: np.exp(-t), 0.0, math.inf, rel_tol=1e-13)
        assert value == pytest.approx(1.0, abs=1e-12)
        assert err >= 0

    def test_half_exp(self):
        value, _ = integrate_adaptive(lambda t: np.exp(-t / 2), 0.0, math.inf, rel_tol=1e-13)
        assert value == pytest.approx(2.0, abs=1e-12)

    def test_oscillator_integrand(self):
        value, _ = integrate_adaptive(lambda t: (0.5 + t / 2) * np.exp(-t / 2), 0.0, math.inf)
        assert value == pytest.approx(3.0, abs=1e-10)

    def test_finite_interval_with_kink(self):
        value, _ = integrate_adaptive(lambda t: np.abs(t - 0.3), 0.0, 1.0, rel_tol=1e-12, breakpoints=(0.3,))
        assert value == pytest.approx(0.045 + 0.245, rel=1e-12)

    def test_finite_interval_without_breakpoint(self):
        value, _ = integrate_adaptive(lambda t: np.sqrt(t), 0.0, 1.0, rel_tol=1e-9)
        assert value == pytest.approx(2.0 / 3.0, rel=1e-9)

    def test_tail_bound(self):
        value, err = integrate_adaptive(lambda t: np.exp(-t), 0.0, math.inf, rel_tol=1e-12,
                                        tail_bound=lambda t: math.exp(-t))
        assert value == pytest.approx(1.0, rel=1e-12)
        assert err < 1e-10

    def test_non_convergence_carries_estimate(self):
        with pytest.raises(QuadratureError) as info:
            integrate_adaptive(lambda t: 1.0 / (1.0 + t), 0.0, math.inf, max_doublings=5)
        assert math.isfinite(info.value.value)

    def test_refinement_budget(self):
        with pytest.raises(QuadratureError):
            integrate_adaptive(lambda t: np.sin(1.0 / np.maximum(t, 1e-300)), 0.0, 1.0,
                               rel_tol=1e-14, max_panels=20)

    def test_invalid(self):
        with pytest.raises(ValueError):
            integrate_adaptive(np.exp, 1.0, 0.0)
        with pytest.raises(ValueError):
            integrate_adaptive(np.exp, 0.0, 1.0, rel_tol=0.0)

    @pytest.mark.parametrize("tol", [1e-6, 1e-9, 1e-12])
    def test_tighter_tolerance_is_no_worse(self, tol):
        f = lambda t: np.exp(-t) * np.cos(3 * t) ** 2  # noqa: E731
        exact = 0.5 + 0.5 / (1 + 36)
        value, _ = integrate_adaptive(f, 0.0, math.inf, rel_tol=tol)
        assert abs(value - exact) <= 10 * tol


class TestSemiInfinite:
    def test_smooth_integrand(self):
        value, _ = integrate_semi_infinite(lambda t: t ** 3 * np.exp(-t))
        assert value == pytest.approx(6.0, rel=1e-13)

    def test_fallback_on_kink(self):
        f = lambda t: np.minimum(t, 1.0) * np.exp(-t)  # noqa: E731
        value, _ = integrate_semi_infinite(f, rel_tol=1e-12, breakpoints=(1.0,))
        assert value == pytest.approx(1.0 - math.exp(-1.0), rel=1e-11)

    def test_slow_decay_uses_adaptive(self):
        value, _ = integrate_semi_infinite(lambda t: 1.0 / (1.0 + t) ** 3, rel_tol=1e-11)
        assert value == pytest.approx(0.5, rel=1e-10)
