import math

import numpy as np
import pytest

from rydwave.errors import QuadratureError
from rydwave.hydrogenic import (
    QuadratureRule,
    RadialEigenstate,
    adaptive_integrate,
    overlap,
    radial_eigenfunction,
    radial_eigenfunction_pair,
    radial_grid,
)

RULE = QuadratureRule()


class TestClosedForms:
    def test_ground_state(self):
        # R_{1,0}(r) = 2 e^{-r}; at r=1: 0.73575888234288464
        val = radial_eigenfunction(1, 0, np.array([1.0]))[0]
        assert val == pytest.approx(0.73575888234288464, rel=1e-14)

    def test_2p_state(self):
        # R_{2,1}(r) = r e^{-r/2} / (2 sqrt 6); at r=2: 0.15018615295504259
        val = radial_eigenfunction(2, 1, np.array([2.0]))[0]
        assert val == pytest.approx(0.15018615295504259, rel=1e-13)

    def test_rejects_invalid_quantum_numbers(self):
        with pytest.raises(ValueError):
            radial_eigenfunction(1, 1, np.array([1.0]))
        with pytest.raises(ValueError):
            radial_eigenfunction(3, -1, np.array([1.0]))

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            radial_eigenfunction(2, 1, np.array([0.0]))


class TestRecurrenceAccuracy:
    def test_against_high_precision_series(self):
        """Dual route: mpmath evaluates the closed form at 40 digits."""
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        rng = np.random.default_rng(1234)
        rs = rng.uniform(1.0, 900.0, size=10)
        got = radial_eigenfunction(20, 1, rs)
        for r, g in zip(rs, got):
            x = 2 * mp.mpf(repr(float(r))) / 20
            norm = mp.sqrt((mp.mpf(2) / 20) ** 3 * mp.factorial(18) / (40 * mp.factorial(21)))
            want = norm * mp.e ** (-x / 2) * x * mp.laguerre(18, 3, x)
            assert abs(g - float(want)) / abs(float(want)) < 1e-9

    def test_derivative_against_central_differences(self):
        r = np.linspace(5.0, 6000.0, 400)
        R, dR = radial_eigenfunction_pair(48, 1, r)
        h = 1e-5
        fd = (radial_eigenfunction(48, 1, r + h) - radial_eigenfunction(48, 1, r - h)) / (2 * h)
        mask = np.abs(dR) > 1e-12
        assert np.max(np.abs(fd - dR)[mask] / np.abs(dR)[mask]) < 1e-4

    def test_no_overflow_at_large_n(self):
        r = np.geomspace(0.1, 3 * 70**2, 2000)
        vals = radial_eigenfunction(70, 1, r)
        assert np.all(np.isfinite(vals))


class TestOverlaps:
    def test_normalization(self):
        state = RadialEigenstate(48, 1)
        assert abs(overlap(state, 48, 1, RULE) - 1.0) < 1e-8

    def test_orthogonality(self):
        state = RadialEigenstate(48, 1)
        assert abs(overlap(state, 49, 1, RULE)) < 1e-7

    def test_orthonormality_block(self):
        states = {n: RadialEigenstate(n, 1) for n in range(46, 51)}
        for n1 in range(46, 51):
            for n2 in range(n1, 51):
                target = 1.0 if n1 == n2 else 0.0
                val = overlap(states[n1], n2, 1, RULE)
                assert abs(val - target) < 1e-7, (n1, n2, val)

    def test_tolerance_halving_is_stable(self):
        state = RadialEigenstate(40, 1)
        loose = QuadratureRule(abs_tol=2e-8, rel_tol=2e-8)
        tight = QuadratureRule(abs_tol=1e-8, rel_tol=1e-8)
        a = overlap(state, 41, 1, loose)
        b = overlap(state, 41, 1, tight)
        assert abs(a - b) < 2e-8

    def test_panel_budget_failure_is_loud(self):
        rule = QuadratureRule(abs_tol=1e-14, rel_tol=1e-14, max_panels=4)
        state = RadialEigenstate(48, 1)
        with pytest.raises(QuadratureError):
            overlap(state, 48, 1, rule)

    def test_rule_validation(self):
        with pytest.raises(ValueError):
            QuadratureRule(abs_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureRule(r_max_factor=2.0)


class TestAdaptiveIntegrate:
    def test_smooth_oracle(self):
        # int_0^pi sin = 2
        val = adaptive_integrate(np.sin, 0.0, math.pi, RULE)
        assert val.real == pytest.approx(2.0, abs=1e-12)
        assert val.imag == 0.0

    def test_complex_integrand(self):
        # int_0^1 exp(i x) = sin(1) + i(1 - cos(1))
        val = adaptive_integrate(lambda x: np.exp(1j * x), 0.0, 1.0, RULE)
        assert val.real == pytest.approx(math.sin(1.0), abs=1e-12)
        assert val.imag == pytest.approx(1.0 - math.cos(1.0), abs=1e-12)


class TestFixedGrid:
    def test_weights_cover_the_interval(self):
        r, w = radial_grid(100.0, panels=50, points=8)
        assert w.sum() == pytest.approx(100.0, rel=1e-12)
        assert np.all(r > 0.0) and np.all(r < 100.0)
        assert np.all(np.diff(r) > 0)

    def test_integrates_eigenfunction_norms(self):
        r, w = radial_grid(3 * 52**2)
        for n in (46, 52):
            R = radial_eigenfunction(n, 1, r)
            assert np.sum(w * R * R * r * r) == pytest.approx(1.0, abs=1e-10)
