"""
Special function unit tests
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.special import (coherent_amplitudes, displacement_element, displacement_matrix, laguerre,
                         laguerre_explicit, scaled_laguerre)


class TestLaguerre:
    """Recurrence against the exact factorial sum"""

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 15, 20])
    @pytest.mark.parametrize("x", [-50.0, -5.0, 0.0, 0.5, 3.0, 10.0, 50.0])
    def test_recurrence_matches_explicit_sum(self, n, x):
        """Recurrence agrees with the explicit sum to 1e-10 relative to the envelope L_n(-|x|)"""
        scale = max(1.0, laguerre_explicit(n, -abs(x)))
        assert abs(float(laguerre(n, x)) - laguerre_explicit(n, x)) <= 1e-10 * scale

    def test_low_degrees(self):
        """L_0 = 1, L_1 = 1 - x, L_2 = (x^2 - 4x + 2)/2"""
        x = np.linspace(-2, 4, 13)
        assert_allclose(laguerre(0, x), np.ones_like(x))
        assert_allclose(laguerre(1, x), 1 - x)
        assert_allclose(laguerre(2, x), (x ** 2 - 4 * x + 2) / 2, rtol=1e-14, atol=1e-14)

    def test_vectorized(self):
        """Array input keeps its shape"""
        x = np.arange(6.0).reshape(2, 3)
        assert laguerre(4, x).shape == (2, 3)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            laguerre(-1, 0.0)


class TestScaledLaguerre:
    """s^n L_n(x/s) without the s -> 0 division"""

    @pytest.mark.parametrize("s", [0.3, 0.7, 1.0, 2.5, -0.4])
    def test_matches_direct_form(self, s):
        x = np.array([0.0, 0.4, 1.3, 3.0])
        for n in range(6):
            assert_allclose(scaled_laguerre(n, x, s), s ** n * laguerre(n, x / s),
                            rtol=1e-12, atol=1e-12)

    def test_zero_scale_limit(self):
        """s = 0 gives (-x)^n / n!"""
        x = 1.7
        for n, fact in [(1, 1), (2, 2), (3, 6), (4, 24)]:
            assert float(scaled_laguerre(n, x, 0.0)) == pytest.approx((-x) ** n / fact, rel=1e-14)

    def test_continuous_through_zero(self):
        """Tiny scales approach the limit value"""
        x = 0.9
        assert float(scaled_laguerre(3, x, 1e-9)) == pytest.approx(
            float(scaled_laguerre(3, x, 0.0)), rel=1e-7)


class TestDisplacement:
    """Fock matrix elements of D(beta)"""

    def test_vacuum_element(self):
        beta = 0.6 - 0.3j
        assert displacement_element(0, 0, beta) == pytest.approx(np.exp(-abs(beta) ** 2 / 2))

    def test_first_column_is_coherent_state(self):
        """D(beta)|0> = |beta>"""
        beta = 1.1 + 0.4j
        d = displacement_matrix(25, beta)
        assert_allclose(d[:, 0], coherent_amplitudes(beta, 25), atol=1e-14)

    def test_matrix_matches_elements(self):
        beta = -0.8 + 0.5j
        d = displacement_matrix(8, beta)
        for m in range(8):
            for n in range(8):
                assert d[m, n] == pytest.approx(displacement_element(m, n, beta), abs=1e-14)

    def test_low_columns_are_normalized(self):
        """Columns far from the truncation edge keep unit norm"""
        d = displacement_matrix(60, 0.8)
        norms = np.sum(np.abs(d[:, :6]) ** 2, axis=0)
        assert_allclose(norms, np.ones(6), atol=1e-12)

    def test_inverse_displacement(self):
        """D(-beta) = D(beta)^dag on the well-resolved block"""
        beta = 0.7 + 0.2j
        d = displacement_matrix(60, beta)
        d_inv = displacement_matrix(60, -beta)
        assert_allclose(d_inv[:6, :6], d.conj().T[:6, :6], atol=1e-14)


class TestCoherentAmplitudes:
    def test_vacuum(self):
        amps = coherent_amplitudes(0, 5)
        assert_allclose(amps, [1, 0, 0, 0, 0])

    def test_poisson_weights(self):
        alpha = 1.5j
        amps = coherent_amplitudes(alpha, 40)
        probs = np.abs(amps) ** 2
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.dot(np.arange(40), probs) == pytest.approx(abs(alpha) ** 2, rel=1e-10)
