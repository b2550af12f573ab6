"""
Closed-form Heisenberg-picture dynamics of the bosonic mode

    a(t) = mu(t) a(0) + sum_k nu_k(t) b_k(0)
    mu   = e^{-i w0 t} cos G~,   nu_k = -i sqrt(gamma_k/gamma) e^{-i w0 t} sin G~
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from .bath import EffectiveBath, ReservoirSpec, reservoir_weights
from .config.settings import settings
from .exceptions import DomainError, QuadratureError
from .schedules import (CouplingSchedule, ScheduleKind, TimeLike, accumulated_phase,
                        mixing_angles)

logger = logging.getLogger(__name__)

DriveFunction = Callable[[np.ndarray], np.ndarray]
DriveSamples = Tuple[Sequence[float], Sequence[float]]


class InitialKind(str, Enum):
    COHERENT = "coherent"
    FOCK = "fock"
    MEAN_NUMBER = "mean_number"


@dataclass(frozen=True)
class ModeInitialState:
    """Initial state of the main mode: Coherent(alpha0) | Fock(N) | MeanNumber(n0)"""
    kind: InitialKind
    alpha0: complex = 0j
    n: int = 0
    n0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", InitialKind(self.kind))
        if self.kind is InitialKind.FOCK and (int(self.n) != self.n or self.n < 0):
            raise DomainError(f"Fock index must be a non-negative integer, got {self.n}")
        if self.kind is InitialKind.MEAN_NUMBER and not self.n0 >= 0:
            raise DomainError(f"initial mean number must be >= 0, got {self.n0}")

    @classmethod
    def coherent(cls, alpha0: complex) -> "ModeInitialState":
        return cls(kind=InitialKind.COHERENT, alpha0=complex(alpha0))

    @classmethod
    def fock(cls, n: int) -> "ModeInitialState":
        return cls(kind=InitialKind.FOCK, n=int(n))

    @classmethod
    def mean_number(cls, n0: float) -> "ModeInitialState":
        return cls(kind=InitialKind.MEAN_NUMBER, n0=float(n0))

    def to_dict(self) -> dict:
        if self.kind is InitialKind.COHERENT:
            return {"kind": "coherent", "alpha0": [self.alpha0.real, self.alpha0.imag]}
        if self.kind is InitialKind.FOCK:
            return {"kind": "fock", "n": self.n}
        return {"kind": "mean_number", "n0": self.n0}


@dataclass(frozen=True)
class LadderCoefficients:
    mu: complex
    nu: Tuple[complex, ...] = field(default_factory=tuple)

    def norm(self) -> float:
        """|mu|^2 + sum |nu_k|^2, equal to 1 for a unitary mixing"""
        return abs(self.mu) ** 2 + sum(abs(v) ** 2 for v in self.nu)


def initial_mean_number(init: ModeInitialState) -> float:
    if init.kind is InitialKind.COHERENT:
        return abs(init.alpha0) ** 2
    if init.kind is InitialKind.FOCK:
        return float(init.n)
    return float(init.n0)


def default_schedule(gamma: float, sched: Optional[CouplingSchedule] = None) -> CouplingSchedule:
    """The given schedule, checked against the bath weight; exponential at rate gamma if None"""
    if sched is None:
        return CouplingSchedule.exponential(gamma)
    if not np.isclose(sched.gamma_total, gamma, rtol=1e-12, atol=1e-15):
        raise DomainError(f"schedule gamma_total={sched.gamma_total} does not match the "
                          f"effective bath gamma={gamma}")
    return sched


def _check_schedule_weight(sched: CouplingSchedule, reservoirs: Sequence[ReservoirSpec]):
    total = sum(r.gamma for r in reservoirs)
    if not np.isclose(sched.gamma_total, total, rtol=1e-12, atol=1e-15):
        raise DomainError(
            f"schedule gamma_total={sched.gamma_total} does not match the reservoir sum {total}"
        )


def ladder_coefficients(t: float, sched: CouplingSchedule, bath: Sequence[ReservoirSpec],
                        omega0: float) -> LadderCoefficients:
    """mu(t) and nu_k(t) for each reservoir"""
    _check_schedule_weight(sched, bath)
    weights = reservoir_weights(bath)
    cos_g, sin_g = mixing_angles(t, sched)
    phase = np.exp(-1j * omega0 * t)
    mu = complex(phase * cos_g)
    nu = tuple(complex(-1j * np.sqrt(w) * phase * sin_g) for w in weights)
    return LadderCoefficients(mu=mu, nu=nu)


def mean_excitation(t: TimeLike, init: ModeInitialState, eff: EffectiveBath,
                    sched: Optional[CouplingSchedule] = None):
    """n(t) = cos^2 G~ n(0) + sin^2 G~ nbar"""
    sched = default_schedule(eff.gamma, sched)
    cos_g, sin_g = mixing_angles(t, sched)
    return initial_mean_number(init) * cos_g ** 2 + eff.nbar * sin_g ** 2


def mode_energy(t: TimeLike, init: ModeInitialState, eff: EffectiveBath, omega0: float,
                sched: Optional[CouplingSchedule] = None):
    """E(t) = omega0 (n(t) + 1/2)"""
    return omega0 * (mean_excitation(t, init, eff, sched) + 0.5)


def charge_discharge_energies(t: TimeLike, n: int, gamma: float):
    """Energies (units of omega0, zero-point terms dropped) of |N>_a |0>_b under exponential coupling

    E_a = N e^{-gamma t}, E_b = N (1 - e^{-gamma t}); E_a + E_b = N at every t.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise DomainError(f"time must be >= 0, got {t}")
    if n < 0:
        raise DomainError(f"excitation number must be >= 0, got {n}")
    e_a = n * np.exp(-gamma * arr)
    e_b = -n * np.expm1(-gamma * arr)
    if arr.ndim == 0:
        return float(e_a), float(e_b)
    return e_a, e_b


def default_quadrature_step(gamma: float, omega0: float) -> float:
    """min(0.01/gamma, 0.01 * 2 pi / omega0), skipping scales that are absent"""
    fraction = settings.QUADRATURE_STEP_FRACTION
    scales = []
    if gamma > 0:
        scales.append(1.0 / gamma)
    if omega0 > 0:
        scales.append(2 * np.pi / omega0)
    if not scales:
        return fraction
    return fraction * min(scales)


def _even_intervals(span: float, step: float) -> int:
    count = max(2, int(np.ceil(span / step)))
    return count + (count % 2)


def driven_mean_amplitude(t: float, sched: CouplingSchedule, bath: Sequence[ReservoirSpec],
                          omega0: float, f_ext: Union[DriveFunction, DriveSamples],
                          alpha0: complex = 0j, step: Optional[float] = None) -> complex:
    """<a(t)> under an external drive f_ext(t)(a + a^dag)

        <a(t)> = mu(t) alpha0 - i int_0^t e^{-i w0 (t-t')} cos[G~(t) - G~(t')] f_ext(t') dt'

    `f_ext` is either a callable or (times, values) samples spanning [0, t]. Callables are
    sampled on a uniform grid; for the exponential schedule the grid is uniform in
    u = sqrt(t'), where the integrand is smooth despite G~ ~ sqrt(t') near the origin.
    """
    _check_schedule_weight(sched, bath)
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    cos_g, _ = mixing_angles(t, sched)
    mu = np.exp(-1j * omega0 * t) * cos_g
    if t == 0:
        return complex(alpha0)
    phase_t = accumulated_phase(t, sched)

    def kernel(tp: np.ndarray) -> np.ndarray:
        return (np.exp(-1j * omega0 * (t - tp))
                * np.cos(phase_t - np.asarray(accumulated_phase(tp, sched))))

    if callable(f_ext):
        step = step if step is not None else default_quadrature_step(sched.gamma_total, omega0)
        if sched.kind is ScheduleKind.EXPONENTIAL:
            root = np.sqrt(t)
            u = np.linspace(0.0, root, _even_intervals(root, step / max(root, 1.0)) + 1)
            tp = np.minimum(u ** 2, t)
            integrand = kernel(tp) * np.asarray(f_ext(tp), dtype=float) * 2 * u
            integral = simpson(integrand, x=u)
        else:
            tp = np.linspace(0.0, t, _even_intervals(t, step) + 1)
            integral = simpson(kernel(tp) * np.asarray(f_ext(tp), dtype=float), x=tp)
    else:
        times = np.asarray(f_ext[0], dtype=float)
        values = np.asarray(f_ext[1], dtype=float)
        if times.ndim != 1 or times.shape != values.shape or len(times) < 3:
            raise QuadratureError(
                f"drive needs at least 3 samples on a common grid, got {len(np.atleast_1d(times))}"
            )
        if times[0] != 0.0 or not np.isclose(times[-1], t, rtol=1e-12, atol=1e-15):
            raise QuadratureError(f"drive samples must span [0, {t}]")
        integral = simpson(kernel(times) * values, x=times)
    logger.debug("driven amplitude at t=%s: integral=%s", t, integral)
    return complex(mu * alpha0 - 1j * integral)
