"""
Quasi-probability distribution unit tests
"""
import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import poisson

from src.bath import EffectiveBath
from src.exceptions import DomainError, SingularDistributionError
from src.phase_space import (CharacteristicKind, DistributionField, DistributionKind, PhaseGrid,
                             antinormal_second_moment, characteristic_fn, coherent_center,
                             default_grid, evaluate_field, fock_characteristic_normal,
                             gaussian_summary, glauber_p, husimi_peak_path, husimi_q, pn_coherent,
                             pn_coherent_distribution, pn_fock_zero_temp, pn_thermal_stationary,
                             quadrature_integrate, smooth_wigner_to_husimi, thermal_spread,
                             wigner_coherent, wigner_fock)
from src.schedules import CouplingSchedule


@pytest.fixture
def warm_bath():
    return EffectiveBath(gamma=1.0, nbar=1.0)


@pytest.fixture
def cold_bath():
    return EffectiveBath(gamma=1.0, nbar=0.0)


class TestPhaseGrid:
    def test_axes_and_area(self):
        grid = PhaseGrid(-1.0, 1.0, 0.0, 4.0, 5, 9)
        assert_allclose(grid.re_axis, [-1, -0.5, 0, 0.5, 1])
        assert grid.cell_area == pytest.approx(0.5 * 0.5)
        assert grid.points().shape == (5, 9)
        assert grid.points()[1, 2] == pytest.approx(-0.5 + 1.0j)

    def test_invalid_bounds(self):
        with pytest.raises(DomainError):
            PhaseGrid(1.0, -1.0, 0.0, 1.0, 5, 5)
        with pytest.raises(DomainError):
            PhaseGrid(-1.0, 1.0, -1.0, 1.0, 1, 5)


class TestGaussianSummary:
    """Centres and widths of Q, P and W for coherent initial states"""

    def test_width_hierarchy(self, warm_bath):
        q = gaussian_summary(DistributionKind.HUSIMI, 0.8, 2.0, warm_bath, 1.0)
        w = gaussian_summary(DistributionKind.WIGNER, 0.8, 2.0, warm_bath, 1.0)
        p = gaussian_summary(DistributionKind.GLAUBER_P, 0.8, 2.0, warm_bath, 1.0)
        assert q.width - w.width == pytest.approx(0.5)
        assert w.width - p.width == pytest.approx(0.5)
        assert p.width == pytest.approx(1 - np.exp(-0.8))
        assert q.center == w.center == p.center

    def test_center_follows_peak_path(self, warm_bath):
        for t in (0.0, 0.4, 2.0):
            assert coherent_center(t, 1 + 1j, warm_bath, 2.0) == pytest.approx(
                husimi_peak_path(t, 1 + 1j, 1.0, 2.0))

    def test_thermal_spread(self, warm_bath):
        assert thermal_spread(0.0, warm_bath) == 0.0
        assert thermal_spread(50.0, warm_bath) == pytest.approx(1.0)

    def test_schedule_weight_must_match(self, warm_bath):
        """Every entry point rejects a schedule built for another total gamma"""
        sched = CouplingSchedule.constant(0.6, 2.0)
        with pytest.raises(DomainError):
            thermal_spread(1.0, warm_bath, sched)
        with pytest.raises(DomainError):
            husimi_q(0.0, 1.0, 1.0, warm_bath, 1.0, sched)
        with pytest.raises(DomainError):
            wigner_fock(0.0, 1.0, 2, warm_bath, sched)
        with pytest.raises(DomainError):
            characteristic_fn(0.3, 1.0, 1.0, warm_bath, 1.0, CharacteristicKind.NORMAL, sched)
        matching = CouplingSchedule.constant(0.6, 1.0)
        assert thermal_spread(1.0, warm_bath, matching) == pytest.approx(np.sin(0.6) ** 2)


class TestHusimi:
    def test_value_at_centre(self, warm_bath):
        t = 1.0
        center = coherent_center(t, 2.0, warm_bath, 1.0)
        width = 1 + (1 - np.exp(-1.0))
        assert husimi_q(center, t, 2.0, warm_bath, 1.0) == pytest.approx(1 / (np.pi * width))

    def test_normalized(self, warm_bath):
        """Simpson integral over the default grid is 1"""
        summary = gaussian_summary(DistributionKind.HUSIMI, 1.0, 2.0, warm_bath, 1.0)
        field = evaluate_field(DistributionKind.HUSIMI, default_grid(summary), 1.0, 2.0,
                               warm_bath, 1.0)
        assert quadrature_integrate(field) == pytest.approx(1.0, abs=1e-8)

    def test_grid_argmax_tracks_peak(self, cold_bath):
        t = 0.7
        peak = husimi_peak_path(t, 2.0, 1.0, 1.0)
        summary = gaussian_summary(DistributionKind.HUSIMI, t, 2.0, cold_bath, 1.0)
        grid = default_grid(summary, points=129)
        field = evaluate_field(DistributionKind.HUSIMI, grid, t, 2.0, cold_bath, 1.0)
        i, j = np.unravel_index(np.argmax(field.values), field.values.shape)
        spacing = grid.re_axis[1] - grid.re_axis[0]
        assert abs(grid.points()[i, j] - peak) <= spacing

    def test_antinormal_second_moment(self, warm_bath):
        """<a a^dag> from the Q quadrature matches the closed form"""
        t = 1.0
        summary = gaussian_summary(DistributionKind.HUSIMI, t, 2.0, warm_bath, 1.0)
        field = evaluate_field(DistributionKind.HUSIMI, default_grid(summary), t, 2.0,
                               warm_bath, 1.0)
        expected = antinormal_second_moment(t, 2.0, warm_bath)
        assert expected == pytest.approx(1 + 4 * np.exp(-1) + (1 - np.exp(-1)))
        assert quadrature_integrate(field, moment=1) == pytest.approx(expected, abs=1e-3)

    def test_small_grid_warns(self, warm_bath, caplog):
        grid = PhaseGrid(-1.0, 1.0, -1.0, 1.0, 33, 33)
        field = evaluate_field(DistributionKind.HUSIMI, grid, 0.0, 0.0, warm_bath, 1.0)
        with caplog.at_level(logging.WARNING, logger="src.phase_space"):
            quadrature_integrate(field)
        assert "grid too small" in caplog.text

    def test_negative_moment_rejected(self, warm_bath):
        grid = PhaseGrid(-1.0, 1.0, -1.0, 1.0, 5, 5)
        field = evaluate_field(DistributionKind.HUSIMI, grid, 0.0, 0.0, warm_bath, 1.0)
        with pytest.raises(DomainError):
            quadrature_integrate(field, moment=-1)


class TestGlauberP:
    def test_delta_at_initial_time(self, warm_bath):
        with pytest.raises(SingularDistributionError) as exc_info:
            glauber_p(0.0, 0.0, 1.5 + 0.5j, warm_bath, 1.0)
        assert exc_info.value.location == pytest.approx(1.5 + 0.5j)

    def test_delta_for_zero_temperature(self, cold_bath):
        with pytest.raises(SingularDistributionError) as exc_info:
            glauber_p(0.0, 1.0, 2.0, cold_bath, 0.0)
        assert exc_info.value.location == pytest.approx(2.0 * np.exp(-0.5))

    def test_regular_gaussian(self, warm_bath):
        t = 2.0
        sigma = 1 - np.exp(-2.0)
        center = coherent_center(t, 1.0, warm_bath, 1.0)
        assert glauber_p(center, t, 1.0, warm_bath, 1.0) == pytest.approx(1 / (np.pi * sigma))

    @pytest.mark.parametrize("t", [1e-2, 1e-3, 1e-4])
    def test_narrow_field_normalized_on_default_grid(self, warm_bath, t):
        """sigma = 1 - e^{-t} shrinks towards zero; the default grid shrinks with it"""
        summary = gaussian_summary(DistributionKind.GLAUBER_P, t, 1.0, warm_bath, 1.0)
        field = evaluate_field(DistributionKind.GLAUBER_P, default_grid(summary), t, 1.0,
                               warm_bath, 1.0)
        assert quadrature_integrate(field) == pytest.approx(1.0, abs=1e-6)

    def test_default_grid_rejects_delta(self, warm_bath):
        summary = gaussian_summary(DistributionKind.GLAUBER_P, 0.0, 1.0, warm_bath, 1.0)
        with pytest.raises(SingularDistributionError) as exc_info:
            default_grid(summary)
        assert exc_info.value.location == pytest.approx(1.0)


class TestWigner:
    def test_coherent_normalized(self, warm_bath):
        summary = gaussian_summary(DistributionKind.WIGNER, 0.5, 1 + 1j, warm_bath, 1.0)
        field = evaluate_field(DistributionKind.WIGNER, default_grid(summary), 0.5, 1 + 1j,
                               warm_bath, 1.0)
        assert quadrature_integrate(field) == pytest.approx(1.0, abs=1e-8)

    def test_vacuum_value(self, cold_bath):
        assert wigner_coherent(0.0, 0.0, 0.0, cold_bath, 1.0) == pytest.approx(2 / np.pi)

    def test_fock_one_negative_at_origin(self, warm_bath):
        """W of |1> at t = 0 is -2/pi at the origin"""
        assert float(wigner_fock(0.0, 0.0, 1, warm_bath)) == pytest.approx(-2 / np.pi, abs=1e-12)

    def test_fock_one_thermalized_value(self, warm_bath):
        """gamma t = 1, nbar = 1: W(0) = 0.18980 (negativity washed out)"""
        assert float(wigner_fock(0.0, 1.0, 1, warm_bath)) == pytest.approx(0.18980, abs=1e-3)

    def test_fock_zero_matches_coherent_vacuum(self, warm_bath):
        alphas = np.array([0.0, 0.3 + 0.4j, -1.2, 2j])
        for t in (0.0, 0.6, 3.0):
            assert_allclose(wigner_fock(alphas, t, 0, warm_bath),
                            wigner_coherent(alphas, t, 0.0, warm_bath, 1.0), rtol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_fock_normalized(self, warm_bath, n):
        grid = PhaseGrid(-8.0, 8.0, -8.0, 8.0, 257, 257)
        values = wigner_fock(grid.points(), 0.4, n, warm_bath)
        field = DistributionField(grid=grid, values=values, kind=DistributionKind.WIGNER)
        assert quadrature_integrate(field) == pytest.approx(1.0, abs=1e-6)

    def test_fock_crossover_branch_continuous(self):
        """psi = 0 (cos^2 = phi) takes the limit branch without a jump"""
        bath = EffectiveBath(gamma=1.0, nbar=0.0)
        t_cross = np.log(2.0)
        below = float(wigner_fock(0.3, t_cross * (1 - 1e-9), 2, bath))
        at = float(wigner_fock(0.3, t_cross, 2, bath))
        assert at == pytest.approx(below, rel=1e-6)

    def test_smoothing_recovers_husimi(self, warm_bath):
        """W convolved with the vacuum kernel is Q"""
        t, alpha0 = 0.7, 1.0 - 0.5j
        summary = gaussian_summary(DistributionKind.HUSIMI, t, alpha0, warm_bath, 1.0)
        grid = default_grid(summary, points=201)
        wigner = evaluate_field(DistributionKind.WIGNER, grid, t, alpha0, warm_bath, 1.0)
        smoothed = smooth_wigner_to_husimi(wigner)
        husimi = evaluate_field(DistributionKind.HUSIMI, grid, t, alpha0, warm_bath, 1.0)
        assert smoothed.kind is DistributionKind.HUSIMI
        interior = (slice(50, -50), slice(50, -50))
        assert_allclose(smoothed.values[interior], husimi.values[interior], atol=1e-6)

    def test_smoothing_needs_wigner_field(self, warm_bath):
        grid = PhaseGrid(-1.0, 1.0, -1.0, 1.0, 5, 5)
        field = evaluate_field(DistributionKind.HUSIMI, grid, 0.0, 0.0, warm_bath, 1.0)
        with pytest.raises(DomainError):
            smooth_wigner_to_husimi(field)


class TestCharacteristicFunctions:
    @pytest.mark.parametrize("kind", list(CharacteristicKind))
    def test_unity_at_origin(self, warm_bath, kind):
        assert characteristic_fn(0.0, 0.9, 1 + 1j, warm_bath, 1.0, kind) == pytest.approx(1.0)

    def test_ordering_relations(self, warm_bath):
        lam = np.array([0.2 + 0.1j, -0.5j, 1.0])
        args = (0.9, 1 + 1j, warm_bath, 1.0)
        c_a = characteristic_fn(lam, *args, CharacteristicKind.ANTINORMAL)
        c_n = characteristic_fn(lam, *args, CharacteristicKind.NORMAL)
        c_w = characteristic_fn(lam, *args, CharacteristicKind.WIGNER)
        r2 = np.abs(lam) ** 2
        assert_allclose(c_n, c_a * np.exp(r2), rtol=1e-14)
        assert_allclose(c_w, c_a * np.exp(r2 / 2), rtol=1e-14)

    def test_fock_characteristic(self, warm_bath):
        assert fock_characteristic_normal(0.0, 0.5, 3, warm_bath) == pytest.approx(1.0)
        # |1> at t = 0: C_N = 1 - |l|^2
        assert fock_characteristic_normal(0.5, 0.0, 1, warm_bath) == pytest.approx(0.75)


class TestFockPopulations:
    """Photon-number distributions"""

    def test_coherent_zero_temperature_is_poisson(self, cold_bath):
        t, alpha0 = 0.8, 1.5 + 0.5j
        mean = abs(alpha0) ** 2 * np.exp(-t)
        for n in range(10):
            assert pn_coherent(n, t, alpha0, cold_bath) == pytest.approx(
                poisson.pmf(n, mean), abs=1e-14)

    def test_coherent_long_time_is_geometric(self, warm_bath):
        for n in range(8):
            assert pn_coherent(n, 30.0, 2.0, warm_bath) == pytest.approx(
                pn_thermal_stationary(n, 1.0), abs=1e-9)

    def test_coherent_distribution_sums_to_one(self, warm_bath):
        probs = pn_coherent_distribution(0.5, 2.0 + 1j, warm_bath)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)
        mean = np.dot(np.arange(len(probs)), probs)
        assert mean == pytest.approx(5 * np.exp(-0.5) + (1 - np.exp(-0.5)), abs=1e-8)

    def test_negative_index(self, warm_bath):
        assert pn_coherent(-1, 1.0, 1.0, warm_bath) == 0.0
        assert pn_thermal_stationary(-1, 1.0) == 0.0

    def test_thermal_stationary(self):
        probs = [pn_thermal_stationary(n, 1.0) for n in range(200)]
        assert sum(probs) == pytest.approx(1.0)
        assert probs[3] == pytest.approx(1 / 16)
        assert pn_thermal_stationary(0, 0.0) == 1.0

    def test_fock_binomial(self):
        sched = CouplingSchedule.exponential(1.0)
        t = 0.6
        c2 = np.exp(-t)
        assert pn_fock_zero_temp(3, t, 3, sched) == pytest.approx(c2 ** 3)
        assert pn_fock_zero_temp(1, t, 3, sched) == pytest.approx(3 * c2 * (1 - c2) ** 2)
        assert pn_fock_zero_temp(4, t, 3, sched) == 0.0
        total = sum(pn_fock_zero_temp(n, t, 3, sched) for n in range(4))
        assert total == pytest.approx(1.0)
