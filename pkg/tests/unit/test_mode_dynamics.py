"""
Heisenberg-picture mode dynamics unit tests
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.bath import ReservoirSpec, effective_bath
from src.exceptions import DomainError, QuadratureError
from src.mode_dynamics import (InitialKind, ModeInitialState, charge_discharge_energies,
                               default_quadrature_step, driven_mean_amplitude,
                               initial_mean_number, ladder_coefficients, mean_excitation,
                               mode_energy)
from src.schedules import CouplingSchedule


@pytest.fixture
def two_baths():
    return [ReservoirSpec(gamma=1.0, nbar=0.5), ReservoirSpec(gamma=3.0, nbar=2.0)]


class TestModeInitialState:
    def test_variants(self):
        assert ModeInitialState.coherent(1 + 1j).kind is InitialKind.COHERENT
        assert ModeInitialState.fock(3).n == 3
        assert ModeInitialState.mean_number(0.5).n0 == 0.5

    def test_invalid_fock_index(self):
        with pytest.raises(DomainError):
            ModeInitialState.fock(-1)

    def test_initial_mean_number(self):
        assert initial_mean_number(ModeInitialState.coherent(1 + 2j)) == pytest.approx(5.0)
        assert initial_mean_number(ModeInitialState.fock(4)) == 4.0
        assert initial_mean_number(ModeInitialState.mean_number(0.3)) == 0.3

    def test_to_dict(self):
        assert ModeInitialState.coherent(1 - 1j).to_dict() == {"kind": "coherent",
                                                               "alpha0": [1.0, -1.0]}


class TestLadderCoefficients:
    """mu(t), nu_k(t)"""

    def test_identity_at_zero(self, two_baths):
        coeffs = ladder_coefficients(0.0, CouplingSchedule.exponential(4.0), two_baths, 1.0)
        assert coeffs.mu == pytest.approx(1.0)
        assert all(nu == 0 for nu in coeffs.nu)

    @pytest.mark.parametrize("t", [0.1, 0.7, 3.0])
    def test_unit_norm(self, two_baths, t):
        for sched in (CouplingSchedule.exponential(4.0), CouplingSchedule.constant(0.9, 4.0)):
            coeffs = ladder_coefficients(t, sched, two_baths, 1.3)
            assert coeffs.norm() == pytest.approx(1.0, abs=1e-14)

    def test_reservoir_split(self, two_baths):
        """|nu_k|^2 is shared in proportion to gamma_k"""
        coeffs = ladder_coefficients(1.0, CouplingSchedule.exponential(4.0), two_baths, 0.0)
        ratio = abs(coeffs.nu[1]) ** 2 / abs(coeffs.nu[0]) ** 2
        assert ratio == pytest.approx(3.0)

    def test_schedule_weight_must_match(self, two_baths):
        with pytest.raises(DomainError):
            ladder_coefficients(1.0, CouplingSchedule.exponential(1.0), two_baths, 1.0)


class TestMeanExcitation:
    def test_coherent_exponential(self):
        eff = effective_bath([ReservoirSpec(1.0, 1.0)])
        n_t = mean_excitation(1.0, ModeInitialState.coherent(2.0), eff)
        assert n_t == pytest.approx(4 * np.exp(-1) + (1 - np.exp(-1)))

    def test_three_bath_example(self):
        """n(t) = 4 + e^{-3t} for nbar = (5, 2, 5), n(0) = 5"""
        eff = effective_bath([ReservoirSpec(1.0, 5.0), ReservoirSpec(1.0, 2.0),
                              ReservoirSpec(1.0, 5.0)])
        t = np.linspace(0, 3, 31)
        assert_allclose(mean_excitation(t, ModeInitialState.mean_number(5.0), eff),
                        4 + np.exp(-3 * t), rtol=1e-13)

    def test_limits(self):
        eff = effective_bath([ReservoirSpec(2.0, 0.7)])
        init = ModeInitialState.fock(3)
        assert mean_excitation(0.0, init, eff) == pytest.approx(3.0)
        assert mean_excitation(40.0, init, eff) == pytest.approx(0.7, abs=1e-12)

    def test_constant_schedule_oscillates(self):
        eff = effective_bath([ReservoirSpec(1.0, 0.0)])
        sched = CouplingSchedule.constant(np.pi / 2, 1.0)
        # G~ = pi at t = 2: the excitation has returned to the mode
        assert mean_excitation(2.0, ModeInitialState.fock(2), eff, sched) == pytest.approx(2.0)

    def test_schedule_weight_must_match(self):
        eff = effective_bath([ReservoirSpec(1.0, 0.5), ReservoirSpec(2.0, 0.0)])
        with pytest.raises(DomainError):
            mean_excitation(1.0, ModeInitialState.fock(1), eff, CouplingSchedule.exponential(1.0))
        sched = CouplingSchedule.constant(0.4, 3.0)
        assert mean_excitation(1.0, ModeInitialState.fock(1), eff, sched) > 0

    def test_mode_energy(self):
        eff = effective_bath([ReservoirSpec(1.0, 1.0)])
        init = ModeInitialState.coherent(1.0)
        assert mode_energy(0.5, init, eff, 2.0) == pytest.approx(
            2.0 * (mean_excitation(0.5, init, eff) + 0.5))


class TestBattery:
    """Charge/discharge energies of |N>|0>"""

    def test_crossing_at_ln2(self):
        e_a, e_b = charge_discharge_energies(np.log(2.0), 10, 1.0)
        assert e_a == pytest.approx(5.0, abs=1e-12)
        assert e_b == pytest.approx(5.0, abs=1e-12)

    def test_conservation(self):
        t = np.linspace(0, 6, 61)
        e_a, e_b = charge_discharge_energies(t, 10, 1.0)
        assert_allclose(e_a + e_b, 10.0, rtol=1e-14)
        assert np.all(np.diff(e_a) < 0)

    def test_scalar_returns_floats(self):
        e_a, e_b = charge_discharge_energies(0.0, 4, 2.0)
        assert (e_a, e_b) == (4.0, 0.0)

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            charge_discharge_energies(-1.0, 4, 1.0)


class TestDrivenAmplitude:
    """<a(t)> under an external classical drive"""

    def test_no_drive(self):
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.exponential(1.0)
        alpha0 = 0.5 + 0.2j
        value = driven_mean_amplitude(1.3, sched, bath, 1.0, lambda tp: 0 * tp, alpha0=alpha0)
        expected = np.exp(-1.3j) * np.exp(-0.65) * alpha0
        assert abs(value - expected) < 1e-14

    def test_decoupled_constant_drive(self):
        """g = 0: <a(t)> = e^{-i w t} a0 - f (1 - e^{-i w t}) / w"""
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.constant(0.0, 1.0)
        t, f0, alpha0 = 2.0, 0.3, 0.4
        value = driven_mean_amplitude(t, sched, bath, 1.0, lambda tp: np.full_like(tp, f0),
                                      alpha0=alpha0, step=1e-3)
        expected = np.exp(-1j * t) * alpha0 - f0 * (1 - np.exp(-1j * t))
        assert abs(value - expected) < 1e-9

    def test_samples_match_callable(self):
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.constant(0.8, 1.0)
        t = 2.0
        drive = lambda tp: 0.3 * np.cos(np.asarray(tp))  # noqa: E731
        times = np.linspace(0.0, t, 4001)
        from_samples = driven_mean_amplitude(t, sched, bath, 1.0, (times, drive(times)))
        from_callable = driven_mean_amplitude(t, sched, bath, 1.0, drive)
        assert abs(from_samples - from_callable) < 1e-8

    def test_exponential_schedule_sample_agreement(self):
        """sqrt-substituted callable grid agrees with a fine uniform sample grid"""
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.exponential(1.0)
        t = 2.0
        drive = lambda tp: 0.3 * np.cos(np.asarray(tp))  # noqa: E731
        times = np.linspace(0.0, t, 40001)
        from_samples = driven_mean_amplitude(t, sched, bath, 1.0, (times, drive(times)))
        from_callable = driven_mean_amplitude(t, sched, bath, 1.0, drive)
        assert abs(from_samples - from_callable) < 1e-5

    def test_too_few_samples(self):
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.exponential(1.0)
        with pytest.raises(QuadratureError):
            driven_mean_amplitude(1.0, sched, bath, 1.0, ([0.0, 1.0], [0.1, 0.1]))

    def test_samples_must_span_interval(self):
        bath = [ReservoirSpec(1.0, 0.0)]
        sched = CouplingSchedule.exponential(1.0)
        times = np.linspace(0.0, 0.5, 11)
        with pytest.raises(QuadratureError):
            driven_mean_amplitude(1.0, sched, bath, 1.0, (times, np.ones_like(times)))

    def test_default_step(self):
        assert default_quadrature_step(2.0, 1.0) == pytest.approx(0.005)
        assert default_quadrature_step(0.0, 2 * np.pi) == pytest.approx(0.01)
