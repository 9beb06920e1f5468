import math

import numpy as np
import pytest

from rydwave.spectrum import EnergyModel, TimeScales


class TestEnergy:
    def test_hydrogen_ground_state(self):
        assert EnergyModel.hydrogen().energy(1) == -0.5

    def test_hydrogen_48(self):
        assert EnergyModel.hydrogen().energy(48) == pytest.approx(-1.0 / 4608.0, rel=1e-15)

    def test_quantum_defect_48(self):
        # -1/(2 * 47.5^2), 40-digit check: -2.2160664819944598e-4
        model = EnergyModel.quantum_defect(0.5)
        assert model.energy(48) == pytest.approx(-2.2160664819944598e-4, rel=1e-14)

    def test_global_shift_is_additive(self):
        m0 = EnergyModel.hydrogen()
        m1 = EnergyModel.hydrogen(global_shift=1e-6)
        assert m1.energy(10) - m0.energy(10) == pytest.approx(1e-6, rel=1e-12)

    def test_rejects_nonpositive_effective_n(self):
        with pytest.raises(ValueError):
            EnergyModel.quantum_defect(1.5).energy(1)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            EnergyModel.hydrogen().energy(0)

    def test_rejects_negative_delta(self):
        with pytest.raises(ValueError):
            EnergyModel(delta=-0.1)


class TestDerivatives:
    def test_first_derivative_at_one(self):
        assert EnergyModel.hydrogen().energy_derivatives(1.0, order=1) == [1.0]

    def test_second_derivative_at_48(self):
        d1, d2 = EnergyModel.hydrogen().energy_derivatives(48.0, order=2)
        assert d2 == pytest.approx(-5.6514033564814815e-7, rel=1e-14)
        assert d2 == pytest.approx(-3.0 / 48.0**4, rel=1e-15)

    def test_defect_shift_cancels_at_matched_effective_center(self):
        d1 = EnergyModel.quantum_defect(0.5).energy_derivatives(48.5, order=1)[0]
        assert d1 == pytest.approx(1.0 / 48.0**3, rel=1e-15)

    @pytest.mark.parametrize("center", [5.0, 12.5, 30.0, 48.0, 77.0, 100.0])
    def test_matches_finite_differences(self, center):
        """Independent oracle: central differences of the real-argument energy.

        The differences are formed at 40 digits: at step 1e-3 the second
        difference lives ~9 digits below the energy itself, which double
        arithmetic cannot resolve, while the truncation error (the quantity
        under test) sits safely above the 40-digit noise.
        """
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        h = mp.mpf("1e-3")
        c = mp.mpf(repr(center))

        def e(nu):
            return -1 / (2 * nu**2)

        fd1 = (e(c + h) - e(c - h)) / (2 * h)
        fd2 = (e(c + h) - 2 * e(c) + e(c - h)) / h**2
        fd3 = (e(c + 2 * h) - 2 * e(c + h) + 2 * e(c - h) - e(c - 2 * h)) / (2 * h**3)
        d1, d2, d3 = EnergyModel.hydrogen().energy_derivatives(center, order=3)
        assert d1 == pytest.approx(float(fd1), rel=1e-6)
        assert d2 == pytest.approx(float(fd2), rel=1e-6)
        assert d3 == pytest.approx(float(fd3), rel=1e-6)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            EnergyModel.hydrogen().energy_derivatives(48.0, order=4)

    def test_shift_does_not_touch_derivatives(self):
        a = EnergyModel.hydrogen().energy_derivatives(48.0)
        b = EnergyModel.hydrogen(global_shift=2.5e-5).energy_derivatives(48.0)
        assert a == b


class TestTimeScales:
    def test_nanosecond_anchors_at_48(self):
        scales = EnergyModel.hydrogen().time_scales(48.0)
        assert 0.5375 <= scales.t_rev_ns <= 0.5385
        assert 3.220 <= scales.t_sr_ns / 6 <= 3.240
        assert 1.608 <= scales.t_sr_ns / 12 <= 1.620

    @pytest.mark.parametrize("nu", [5.0, 16.0, 48.0, 48.7, 90.0])
    def test_hydrogen_ratios(self, nu):
        scales = EnergyModel.hydrogen().time_scales(nu)
        assert scales.t_rev / scales.t_cl == pytest.approx(2 * nu / 3, rel=1e-12)
        assert scales.t_sr / scales.t_rev == pytest.approx(3 * nu / 4, rel=1e-12)
        assert scales.t_cl == pytest.approx(2 * math.pi * nu**3, rel=1e-12)

    def test_ordering_above_three_halves(self):
        for nu in np.linspace(1.6, 80.0, 25):
            s = EnergyModel.hydrogen().time_scales(float(nu))
            assert 0 < s.t_cl < s.t_rev < s.t_sr

    def test_shift_invariance(self):
        a = EnergyModel.hydrogen().time_scales(48.0)
        b = EnergyModel.hydrogen(global_shift=1e-4).time_scales(48.0)
        for name in ("t_cl", "t_rev", "t_sr"):
            assert getattr(a, name) == pytest.approx(getattr(b, name), rel=1e-15)

    def test_defect_center_uses_effective_value(self):
        a = EnergyModel.quantum_defect(0.5).time_scales(48.0)
        b = EnergyModel.hydrogen().time_scales(47.5)
        assert a.t_cl == pytest.approx(b.t_cl, rel=1e-12)
        assert a.t_rev == pytest.approx(b.t_rev, rel=1e-12)
        assert a.t_sr == pytest.approx(b.t_sr, rel=1e-12)

    def test_timescales_validation(self):
        with pytest.raises(ValueError):
            TimeScales(t_cl=-1.0, t_rev=1.0, t_sr=2.0)
