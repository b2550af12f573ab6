"""
Special functions used by the phase-space closed forms and the oracle

Laguerre polynomials are evaluated with the ascending three-term recurrence
    (k+1) L_{k+1}(x) = (2k+1-x) L_k(x) - k L_{k-1}(x)
which stays accurate for large degree where the factorial sum cancels badly.
"""
from fractions import Fraction
from math import factorial
from typing import Union

import numpy as np
from scipy.special import comb, eval_genlaguerre, gammaln

ArrayLike = Union[float, complex, np.ndarray]


def laguerre(n: int, x: ArrayLike) -> np.ndarray:
    """Laguerre polynomial L_n(x) by the three-term recurrence"""
    if n < 0:
        raise ValueError(f"Laguerre degree must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    curr = 1.0 - x
    for k in range(1, n):
        prev, curr = curr, ((2 * k + 1 - x) * curr - k * prev) / (k + 1)
    return curr


def laguerre_explicit(n: int, x: float) -> float:
    """L_n(x) from the explicit sum sum_k C(n,k) (-x)^k / k!, in exact rational arithmetic"""
    xq = Fraction(x)
    total = Fraction(0)
    for k in range(n + 1):
        total += comb(n, k, exact=True) * (-xq) ** k / factorial(k)
    return float(total)


def scaled_laguerre(n: int, x: ArrayLike, s: float) -> np.ndarray:
    """s^n L_n(x/s), finite and continuous through s = 0

    With S_k = s^k L_k(x/s) the recurrence becomes
        (k+1) S_{k+1} = ((2k+1) s - x) S_k - k s^2 S_{k-1}
    so the s -> 0 limit (-x)^n / n! comes out without a 0 * inf product.
    """
    if n < 0:
        raise ValueError(f"Laguerre degree must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev
    curr = s - x
    for k in range(1, n):
        prev, curr = curr, (((2 * k + 1) * s - x) * curr - k * s * s * prev) / (k + 1)
    return curr


def displacement_element(m: int, n: int, beta: complex) -> complex:
    """Exact Fock matrix element <m|D(beta)|n> of the displacement operator"""
    x = abs(beta) ** 2
    if m >= n:
        log_ratio = 0.5 * (gammaln(n + 1) - gammaln(m + 1))
        return (np.exp(log_ratio - x / 2) * beta ** (m - n)
                * eval_genlaguerre(n, m - n, x))
    log_ratio = 0.5 * (gammaln(m + 1) - gammaln(n + 1))
    return (np.exp(log_ratio - x / 2) * (-np.conj(beta)) ** (n - m)
            * eval_genlaguerre(m, n - m, x))


def displacement_matrix(dim: int, beta: complex) -> np.ndarray:
    """Block <m|D(beta)|n>, 0 <= m, n < dim, of the untruncated displacement operator"""
    m, n = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    lower = np.minimum(m, n)
    diff = np.abs(m - n)
    x = abs(beta) ** 2
    magnitude = np.exp(0.5 * (gammaln(lower + 1) - gammaln(np.maximum(m, n) + 1)) - x / 2)
    shift = np.where(m >= n, beta ** diff, (-np.conj(beta)) ** diff)
    return magnitude * shift * eval_genlaguerre(lower, diff, x)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Fock amplitudes <n|alpha> for n < dim"""
    n = np.arange(dim)
    log_mag = -abs(alpha) ** 2 / 2 - 0.5 * gammaln(n + 1)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    return np.exp(log_mag + n * np.log(abs(alpha))) * np.exp(1j * n * np.angle(alpha))
