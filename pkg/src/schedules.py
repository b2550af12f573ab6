"""
Time-dependent coupling schedules

A schedule is the pair (g(t), G~(t)) with G~(t) = sqrt(gamma) * int_0^t g(t') dt',
gamma being the total coupling weight sum_k gamma_k. Every closed form in the
package consumes G~ (or cos/sin of it); g(t) itself is only needed for rates.

Variants:
    exponential  cos^2 G~(t) = exp(-gamma t), the Lindblad-equivalent choice
    constant     g(t) = g0, G~(t) = g0 sqrt(gamma) t
    tabulated    g sampled on a grid, integrated with the trapezoid rule
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DomainError, QuadratureError, SingularityError

logger = logging.getLogger(__name__)

TimeLike = Union[float, Sequence[float], np.ndarray]


class ScheduleKind(str, Enum):
    EXPONENTIAL = "exponential"
    CONSTANT = "constant"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class CouplingSchedule:
    """Coupling schedule with total coupling weight `gamma_total`"""
    kind: ScheduleKind
    gamma_total: float
    g0: float = 0.0
    times: Optional[Tuple[float, ...]] = None
    samples: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ScheduleKind(self.kind))
        if not np.isfinite(self.gamma_total) or self.gamma_total < 0:
            raise DomainError(f"gamma_total must be finite and >= 0, got {self.gamma_total}")
        if self.kind is ScheduleKind.EXPONENTIAL and self.gamma_total == 0:
            raise DomainError("exponential schedule needs gamma_total > 0")
        if self.kind is ScheduleKind.CONSTANT and self.g0 < 0:
            raise DomainError(f"constant coupling must be >= 0, got {self.g0}")
        if self.kind is ScheduleKind.TABULATED:
            self._validate_table()

    def _validate_table(self):
        if self.times is None or self.samples is None:
            raise DomainError("tabulated schedule needs both times and samples")
        times = np.asarray(self.times, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        if times.shape != samples.shape or times.ndim != 1:
            raise DomainError("times and samples must be 1-D arrays of equal length")
        if len(times) < 2:
            raise QuadratureError(f"tabulated schedule needs at least 2 samples, got {len(times)}")
        if times[0] != 0.0:
            raise DomainError("tabulated schedule must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise DomainError("tabulated times must be strictly increasing")
        if np.any(samples < 0):
            raise DomainError("tabulated coupling samples must be >= 0")

    @classmethod
    def exponential(cls, gamma: float) -> "CouplingSchedule":
        return cls(kind=ScheduleKind.EXPONENTIAL, gamma_total=float(gamma))

    @classmethod
    def constant(cls, g0: float, gamma: float) -> "CouplingSchedule":
        return cls(kind=ScheduleKind.CONSTANT, gamma_total=float(gamma), g0=float(g0))

    @classmethod
    def tabulated(cls, times: Sequence[float], samples: Sequence[float],
                  gamma: float) -> "CouplingSchedule":
        return cls(kind=ScheduleKind.TABULATED, gamma_total=float(gamma),
                   times=tuple(float(v) for v in times),
                   samples=tuple(float(v) for v in samples))

    def with_gamma(self, gamma: float) -> "CouplingSchedule":
        """Same coupling shape, different total weight"""
        return CouplingSchedule(kind=self.kind, gamma_total=float(gamma), g0=self.g0,
                                times=self.times, samples=self.samples)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "gamma_total": self.gamma_total}
        if self.kind is ScheduleKind.CONSTANT:
            out["g0"] = self.g0
        if self.kind is ScheduleKind.TABULATED:
            out["times"] = list(self.times)
            out["samples"] = list(self.samples)
        return out


def _as_times(t: TimeLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise DomainError("time must be finite")
    if np.any(arr < 0):
        raise DomainError(f"time must be >= 0, got {t}")
    return arr, arr.ndim == 0


def _unwrap(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def _tabulated_phase(arr: np.ndarray, sched: CouplingSchedule) -> np.ndarray:
    times = np.asarray(sched.times)
    samples = np.asarray(sched.samples)
    if np.any(arr > times[-1]):
        raise DomainError(f"time beyond the tabulated range [0, {times[-1]}]")
    # cumulative integral at the nodes, then the partial trapezoid up to t
    nodes = np.concatenate(([0.0], np.cumsum(np.diff(times) * (samples[1:] + samples[:-1]) / 2)))
    idx = np.clip(np.searchsorted(times, arr, side="right") - 1, 0, len(times) - 2)
    g_t = np.interp(arr, times, samples)
    partial = (arr - times[idx]) * (samples[idx] + g_t) / 2
    return nodes[idx] + partial


def accumulated_phase(t: TimeLike, sched: CouplingSchedule):
    """G~(t) = sqrt(gamma) * int_0^t g"""
    arr, scalar = _as_times(t)
    gamma = sched.gamma_total
    if sched.kind is ScheduleKind.EXPONENTIAL:
        # arctan2 form keeps full precision near t = 0 where arccos(1 - eps) does not
        phase = np.arctan2(np.sqrt(-np.expm1(-gamma * arr)), np.exp(-gamma * arr / 2))
    elif sched.kind is ScheduleKind.CONSTANT:
        phase = sched.g0 * np.sqrt(gamma) * arr
    else:
        phase = np.sqrt(gamma) * _tabulated_phase(arr, sched)
    return _unwrap(np.asarray(phase, dtype=float), scalar)


def single_bath_phase(t: TimeLike, sched: CouplingSchedule):
    """G(t) = int_0^t g, the phase without the sqrt(gamma) weight"""
    if sched.gamma_total == 0:
        arr, scalar = _as_times(t)
        if sched.kind is ScheduleKind.CONSTANT:
            return _unwrap(sched.g0 * arr, scalar)
        return _unwrap(_tabulated_phase(arr, sched), scalar)
    return accumulated_phase(t, sched) / np.sqrt(sched.gamma_total)


def mixing_angles(t: TimeLike, sched: CouplingSchedule):
    """(cos G~(t), sin G~(t)); exact exponentials for the exponential schedule"""
    arr, scalar = _as_times(t)
    if sched.kind is ScheduleKind.EXPONENTIAL:
        gamma = sched.gamma_total
        cos_g = np.exp(-gamma * arr / 2)
        sin_g = np.sqrt(-np.expm1(-gamma * arr))
    else:
        phase = np.asarray(accumulated_phase(arr, sched))
        cos_g, sin_g = np.cos(phase), np.sin(phase)
    return _unwrap(np.asarray(cos_g), scalar), _unwrap(np.asarray(sin_g), scalar)


def instantaneous_coupling(t: TimeLike, sched: CouplingSchedule):
    """g(t) = (dG~/dt) / sqrt(gamma)"""
    arr, scalar = _as_times(t)
    if sched.kind is ScheduleKind.EXPONENTIAL:
        if np.any(arr == 0):
            raise SingularityError(
                "exponential schedule coupling diverges at t = 0",
                details="use accumulated_phase, which is finite there",
            )
        gamma = sched.gamma_total
        g = (np.sqrt(gamma) / 2) * np.exp(-gamma * arr / 2) / np.sqrt(-np.expm1(-gamma * arr))
    elif sched.kind is ScheduleKind.CONSTANT:
        g = np.full_like(arr, sched.g0)
    else:
        times = np.asarray(sched.times)
        if np.any(arr > times[-1]):
            raise DomainError(f"time beyond the tabulated range [0, {times[-1]}]")
        g = np.interp(arr, times, np.asarray(sched.samples))
    return _unwrap(np.asarray(g, dtype=float), scalar)


def phase_rate(t: TimeLike, sched: CouplingSchedule):
    """dG~/dt = sqrt(gamma) g(t)"""
    return np.sqrt(sched.gamma_total) * instantaneous_coupling(t, sched)


def population_decay_rate(t: TimeLike, sched: CouplingSchedule):
    """d cos^2 G~ / dt = -sin(2 G~) dG~/dt; finite at t = 0 for every variant"""
    arr, scalar = _as_times(t)
    if sched.kind is ScheduleKind.EXPONENTIAL:
        gamma = sched.gamma_total
        return _unwrap(-gamma * np.exp(-gamma * arr), scalar)
    phase = np.asarray(accumulated_phase(arr, sched))
    rate = -np.sin(2 * phase) * np.asarray(phase_rate(arr, sched))
    return _unwrap(np.asarray(rate, dtype=float), scalar)
