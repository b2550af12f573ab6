"""
Brute-force oracle for the two-level system and its two two-level reservoirs

The Hamiltonian is assembled from Pauli matrices in the order bath1 (x) system (x) bath2:

    H(t) = w0/2 (sz1 + sz + sz2) + g(t) [sqrt(g1)(s1- s+ + s1+ s-) + sqrt(g2)(s2- s+ + s2+ s-)]

H(t) commutes with itself at different times, so exp(-i int H) is exact; the
stepped path multiplies short-step exponentials as an independent cross-check.
"""
import logging
from typing import Optional

import numpy as np
from scipy import linalg

from ..config.settings import settings
from ..exceptions import ConvergenceError, DegenerateBathError, DomainError, NormalizationError
from ..schedules import CouplingSchedule, accumulated_phase
from ..tls import TlsBathSpec, TlsDensity

logger = logging.getLogger(__name__)

_EYE = np.eye(2)
_SZ = np.diag([1.0, -1.0])
_RAISE = np.array([[0.0, 1.0], [0.0, 0.0]])
_LOWER = _RAISE.T

EXACT = "exact"
STEPPED = "stepped"


def _kron3(first: np.ndarray, middle: np.ndarray, last: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(first, middle), last)


def free_hamiltonian(omega0: float) -> np.ndarray:
    return omega0 / 2 * (_kron3(_SZ, _EYE, _EYE) + _kron3(_EYE, _SZ, _EYE)
                         + _kron3(_EYE, _EYE, _SZ))


def exchange_operator(gamma1: float, gamma2: float) -> np.ndarray:
    """sqrt(g1)(s1- s+ + s1+ s-) + sqrt(g2)(s2- s+ + s2+ s-)"""
    bath1 = _kron3(_LOWER, _RAISE, _EYE) + _kron3(_RAISE, _LOWER, _EYE)
    bath2 = _kron3(_EYE, _RAISE, _LOWER) + _kron3(_EYE, _LOWER, _RAISE)
    return np.sqrt(gamma1) * bath1 + np.sqrt(gamma2) * bath2


def _unitary(generator: np.ndarray) -> np.ndarray:
    """exp(-i A) for Hermitian A by eigendecomposition"""
    values, vectors = linalg.eigh(generator)
    return (vectors * np.exp(-1j * values)) @ vectors.conj().T


def _check_schedule(gamma1: float, gamma2: float, sched: Optional[CouplingSchedule]):
    gamma = gamma1 + gamma2
    if gamma == 0:
        raise DegenerateBathError("gamma1 = gamma2 = 0: the system is decoupled")
    if sched is None:
        return CouplingSchedule.exponential(gamma)
    if not np.isclose(sched.gamma_total, gamma, rtol=1e-12, atol=1e-15):
        raise DomainError(f"schedule gamma_total={sched.gamma_total} differs from gamma1+gamma2={gamma}")
    return sched


def propagator_exact(t: float, gamma1: float, gamma2: float, omega0: float,
                     sched: Optional[CouplingSchedule] = None) -> np.ndarray:
    """exp(-i [w0 t H_free + G(t) V]) with G = int g = G~/sqrt(gamma)"""
    sched = _check_schedule(gamma1, gamma2, sched)
    coupling = float(accumulated_phase(t, sched)) / np.sqrt(gamma1 + gamma2)
    return _unitary(free_hamiltonian(omega0) * t + coupling * exchange_operator(gamma1, gamma2))


def propagator_stepped(t: float, gamma1: float, gamma2: float, omega0: float,
                       sched: Optional[CouplingSchedule] = None,
                       step_count: Optional[int] = None) -> np.ndarray:
    """Time-ordered product of per-step exponentials; each step integrates g exactly"""
    sched = _check_schedule(gamma1, gamma2, sched)
    steps = step_count or settings.ORACLE_STEP_COUNT
    grid = np.linspace(0.0, t, steps + 1)
    d_coupling = np.diff(np.asarray(accumulated_phase(grid, sched))) / np.sqrt(gamma1 + gamma2)
    free = free_hamiltonian(omega0) * (t / steps)
    exchange = exchange_operator(gamma1, gamma2)
    u = np.eye(8, dtype=complex)
    for dg in d_coupling:
        u = _unitary(free + dg * exchange) @ u
    return u


def product_state(system: TlsDensity, bath1: TlsBathSpec, bath2: TlsBathSpec) -> np.ndarray:
    rho1 = np.diag([bath1.up, 1 - bath1.up])
    rho2 = np.diag([bath2.up, 1 - bath2.up])
    rho_s = np.array([[system.a, np.conj(system.c)], [system.c, system.b]])
    return _kron3(rho1, rho_s, rho2).astype(complex)


def _propagator(t: float, gamma1: float, gamma2: float, omega0: float,
                sched: Optional[CouplingSchedule], step_count: Optional[int],
                method: str) -> np.ndarray:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    if method == EXACT:
        return propagator_exact(t, gamma1, gamma2, omega0, sched)
    if method != STEPPED:
        raise DomainError(f"unknown oracle method '{method}', expected '{EXACT}' or '{STEPPED}'")
    steps = step_count or settings.ORACLE_STEP_COUNT
    coarse = propagator_stepped(t, gamma1, gamma2, omega0, sched, steps)
    fine = propagator_stepped(t, gamma1, gamma2, omega0, sched, 2 * steps)
    change = float(np.max(np.abs(fine - coarse)))
    if change > settings.ORACLE_CONVERGENCE_TOLERANCE:
        raise ConvergenceError(f"stepped propagator changed by {change:.3e} on halving dt",
                               details=f"step count {steps}")
    return fine


def tls_oracle(system: TlsDensity, bath1: TlsBathSpec, bath2: TlsBathSpec, omega0: float,
               sched: Optional[CouplingSchedule], t: float, step_count: Optional[int] = None,
               method: str = EXACT) -> np.ndarray:
    """8x8 density matrix rho(t) = U rho(0) U^dag"""
    u = _propagator(t, bath1.gamma, bath2.gamma, omega0, sched, step_count, method)
    return u @ product_state(system, bath1, bath2) @ u.conj().T


def tls_oracle_pure(amplitudes, gamma1: float, gamma2: float, omega0: float,
                    sched: Optional[CouplingSchedule], t: float,
                    step_count: Optional[int] = None, method: str = EXACT) -> np.ndarray:
    vec = np.asarray(amplitudes, dtype=complex)
    if abs(np.vdot(vec, vec).real - 1.0) > 1e-9:
        raise NormalizationError("amplitudes must be normalized")
    return _propagator(t, gamma1, gamma2, omega0, sched, step_count, method) @ vec


def partial_trace_system(rho8: np.ndarray) -> np.ndarray:
    """2x2 system block, tracing bath1 and bath2 index by index"""
    out = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            for b1 in range(2):
                for b2 in range(2):
                    out[i, j] += rho8[4 * b1 + 2 * i + b2, 4 * b1 + 2 * j + b2]
    return out
