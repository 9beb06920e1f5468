import math

import numpy as np
import pytest

from rydwave.errors import BracketingError
from rydwave.hydrogenic import QuadratureRule, adaptive_integrate
from rydwave.spectrum import EnergyModel
from rydwave.squeezed import (
    PacketEvolution,
    RadialSqueezedState,
    SqueezedFitConditions,
    analytic_uncertainty_product,
    default_level_range,
    energy_expectation,
    expand_in_eigenbasis,
    moments,
    solve_parameters,
    uncertainty_to_csv,
)

RULE = QuadratureRule()

# spec-mandated verification grid for the closed-form moments
MOMENT_GRID = [
    (alpha, g0, g1)
    for alpha in (1.0, 2.0, 5.0)
    for g0 in (0.01, 0.1, 1.0)
    for g1 in (0.0, 0.05)
]


def quadrature_moments(state: RadialSqueezedState) -> dict:
    """Independent oracle: integrate the moment kernels adaptively.

    psi'/psi = alpha/r - gamma0 - i gamma1, so the momentum kernels reduce
    to real densities; everything is evaluated without the closed forms.
    """
    a, g0, g1 = state.alpha, state.gamma0, state.gamma1
    r_span = 40.0 * (2 * a + 3) / (2 * g0)

    def integral(kernel):
        return adaptive_integrate(
            lambda r: state.density(r) * r * r * kernel(r), 0.0, r_span,
            QuadratureRule(abs_tol=1e-13, rel_tol=1e-13),
        ).real

    return {
        "r": integral(lambda r: r),
        "r2": integral(lambda r: r * r),
        "inv_r": integral(lambda r: 1.0 / r),
        "inv_r2": integral(lambda r: 1.0 / r**2),
        "p": -g1 * integral(lambda r: np.ones_like(r)),
        "p2": integral(lambda r: ((a + 1) / r - g0) ** 2 + g1**2),
    }


class TestState:
    def test_normalization_by_quadrature(self):
        state = RadialSqueezedState(alpha=2.0, gamma0=0.1, gamma1=0.05)
        norm = adaptive_integrate(
            lambda r: state.density(r) * r * r, 0.0, 4000.0, RULE
        ).real
        assert norm == pytest.approx(1.0, abs=1e-10)

    def test_complex_phase_only_from_gamma1(self):
        state = RadialSqueezedState(alpha=1.0, gamma0=0.5, gamma1=0.3)
        r = np.array([0.5, 2.0, 7.0])
        vals = state(r)
        assert np.allclose(np.abs(vals), state.envelope(r))

    def test_validation(self):
        with pytest.raises(ValueError):
            RadialSqueezedState(alpha=-1.0, gamma0=0.5)
        with pytest.raises(ValueError):
            RadialSqueezedState(alpha=1.0, gamma0=0.0)


class TestMoments:
    @pytest.mark.parametrize("alpha,g0,g1", MOMENT_GRID)
    def test_closed_forms_match_quadrature(self, alpha, g0, g1):
        state = RadialSqueezedState(alpha=alpha, gamma0=g0, gamma1=g1)
        m = moments(state)
        q = quadrature_moments(state)
        assert m.r_mean == pytest.approx(q["r"], rel=1e-8)
        assert m.r2_mean == pytest.approx(q["r2"], rel=1e-8)
        assert m.inv_r_mean == pytest.approx(q["inv_r"], rel=1e-8)
        assert m.inv_r2_mean == pytest.approx(q["inv_r2"], rel=1e-8)
        assert m.p_mean == pytest.approx(q["p"], rel=1e-8, abs=1e-15)
        assert m.p2_mean == pytest.approx(q["p2"], rel=1e-8)

    def test_example_mean_radius(self):
        assert moments(RadialSqueezedState(1.0, 0.5)).r_mean == 5.0

    def test_real_state_has_no_momentum(self):
        assert moments(RadialSqueezedState(3.0, 0.2, 0.0)).p_mean == 0.0

    @pytest.mark.parametrize("alpha,g0,g1", MOMENT_GRID)
    def test_uncertainty_product_identity(self, alpha, g0, g1):
        state = RadialSqueezedState(alpha=alpha, gamma0=g0, gamma1=g1)
        m = moments(state)
        expected = analytic_uncertainty_product(alpha)
        assert m.uncertainty_product == pytest.approx(expected, rel=1e-12)
        assert m.uncertainty_product > 0.5

    def test_rejects_small_alpha(self):
        with pytest.raises(ValueError):
            moments(RadialSqueezedState(alpha=0.4, gamma0=0.5))


class TestSolve:
    def test_apsidal_radius_formula(self):
        cond = SqueezedFitConditions(n_bar=48)
        assert cond.r_out == pytest.approx(4606.9997828918695, rel=1e-14)
        assert cond.e_target == pytest.approx(-1.0 / 4608.0, rel=1e-15)

    @pytest.mark.parametrize("n_bar", [10, 24, 48])
    def test_residuals_within_tolerance(self, n_bar):
        cond = SqueezedFitConditions(n_bar=n_bar)
        state = solve_parameters(cond, tol=1e-10)
        m = moments(state)
        assert state.gamma1 == 0.0
        assert abs(m.p_mean) < 1e-10
        assert abs(m.r_mean - cond.r_out) / cond.r_out < 1e-10
        h = energy_expectation(state, cond.l)
        assert abs(h - cond.e_target) / abs(cond.e_target) < 1e-10

    def test_alpha_lands_inside_scan_bracket(self):
        state = solve_parameters(SqueezedFitConditions(n_bar=48))
        assert 0.6 < state.alpha < 4 * 48

    def test_energy_recheck_by_quadrature(self):
        """Independent oracle: <H> from integrals, not the closed forms."""
        cond = SqueezedFitConditions(n_bar=48)
        state = solve_parameters(cond, tol=1e-10)
        q = quadrature_moments(state)
        h = 0.5 * q["p2"] + q["inv_r2"] - q["inv_r"]
        assert abs(h - cond.e_target) / abs(cond.e_target) < 1e-9

    def test_gamma0_scales_inversely_with_center(self):
        """Under n_bar -> sqrt(2) n_bar the fitted gamma0 tracks 1/n_bar."""
        s1 = solve_parameters(SqueezedFitConditions(n_bar=48))
        s2 = solve_parameters(SqueezedFitConditions(n_bar=48 * math.sqrt(2)))
        assert s2.gamma0 / s1.gamma0 == pytest.approx(1 / math.sqrt(2), rel=0.05)

    def test_no_bracket_is_loud(self):
        cond = object.__new__(SqueezedFitConditions)
        object.__setattr__(cond, "n_bar", 10.0)
        object.__setattr__(cond, "l", 1)
        object.__setattr__(cond, "r_out", 199.0)
        object.__setattr__(cond, "e_target", +0.5)   # unreachable positive energy
        with pytest.raises(BracketingError):
            solve_parameters(cond)

    def test_conditions_validation(self):
        with pytest.raises(ValueError):
            SqueezedFitConditions(n_bar=1)
        with pytest.raises(ValueError):
            SqueezedFitConditions(n_bar=48, l=2)


@pytest.fixture(scope="module")
def fit48():
    return solve_parameters(SqueezedFitConditions(n_bar=48), tol=1e-10)


@pytest.fixture(scope="module")
def expansion48(fit48):
    return expand_in_eigenbasis(fit48, default_level_range(48))


@pytest.fixture(scope="module")
def evolution(expansion48):
    return PacketEvolution(expansion48)


class TestExpansion:
    def test_bessel_inequality(self, expansion48):
        assert expansion48.captured_probability <= 1.0 + 1e-8

    def test_captures_virtually_everything(self, expansion48):
        assert expansion48.captured_probability > 0.99

    def test_dominant_level(self, expansion48):
        assert expansion48.dominant_level == 48

    def test_dominant_over_wider_range(self, fit48):
        exp = expand_in_eigenbasis(fit48, range(40, 57))
        mags = np.abs(exp.coefficients)
        assert exp.levels[int(np.argmax(mags))] == 48


class TestEvolution:
    def test_initial_state_consistency(self, evolution, fit48):
        sample = evolution.observables_at(0.0)
        cond = SqueezedFitConditions(n_bar=48)
        assert abs(sample.r_mean - cond.r_out) / cond.r_out < 0.01
        expected = analytic_uncertainty_product(fit48.alpha)
        assert abs(sample.uncertainty_product - expected) / expected < 0.01

    def test_kepler_oscillation(self, evolution):
        t_cl = EnergyModel.hydrogen().time_scales(48.0).t_cl_ns
        start = evolution.observables_at(0.0)
        mid = evolution.observables_at(t_cl / 2)
        assert mid.r_mean < start.r_mean

    def test_uncertainty_product_oscillates(self, evolution):
        t_cl = EnergyModel.hydrogen().time_scales(48.0).t_cl_ns
        samples = evolution.track(np.linspace(0.0, 2 * t_cl, 81))
        products = [s.uncertainty_product for s in samples]
        assert (max(products) - min(products)) / products[0] > 0.05

    def test_norm_is_conserved(self, evolution):
        t_cl = EnergyModel.hydrogen().time_scales(48.0).t_cl_ns
        samples = evolution.track(np.linspace(0.0, 2 * t_cl, 21))
        norms = [s.norm for s in samples]
        assert max(norms) - min(norms) < 1e-6

    def test_uncertainty_csv_round_trips(self, evolution):
        samples = evolution.track([0.0, 0.001])
        text = uncertainty_to_csv(samples)
        lines = text.splitlines()
        assert lines[0] == "t_ns,r_mean,delta_r,delta_p,uncertainty_product"
        cols = lines[1].split(",")
        assert float(cols[0]) == samples[0].t_ns
        assert float(cols[1]) == samples[0].r_mean

    def test_defect_model_changes_only_phases(self, expansion48):
        evo = PacketEvolution(expansion48, model=EnergyModel.hydrogen(global_shift=1e-5))
        base = PacketEvolution(expansion48)
        a = evo.observables_at(0.004)
        b = base.observables_at(0.004)
        assert a.r_mean == pytest.approx(b.r_mean, rel=1e-9)
