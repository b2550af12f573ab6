"""
Reservoir bookkeeping

Units: hbar = k_B = 1. A reservoir is described by its coupling weight gamma_k and
either its mean occupation nbar_k or theta_k = omega0 / T_k.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
from scipy.special import expit

from .exceptions import DegenerateBathError, DomainError


def thermal_occupation(theta: float) -> float:
    """Bose occupation 1/(e^theta - 1) of a mode with theta = omega0/T"""
    if not theta > 0:
        raise DomainError(
            f"theta must be > 0, got {theta}",
            details="negative or infinite temperatures are not supported",
        )
    if np.isinf(theta):
        return 0.0
    return float(1.0 / np.expm1(theta))


def thermal_tls_population(theta: float) -> float:
    """Up-state population e^-theta / (1 + e^-theta) of a thermal two-level system"""
    if not theta > 0:
        raise DomainError(f"theta must be > 0, got {theta}")
    return float(expit(-theta))


@dataclass(frozen=True)
class ReservoirSpec:
    """Single bosonic reservoir: weight gamma and occupancy (nbar or theta)"""
    gamma: float
    nbar: Optional[float] = None
    theta: Optional[float] = None

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"reservoir gamma must be finite and >= 0, got {self.gamma}")
        if (self.nbar is None) == (self.theta is None):
            raise DomainError("reservoir needs exactly one of nbar or theta")
        if self.nbar is not None and not (np.isfinite(self.nbar) and self.nbar >= 0):
            raise DomainError(f"reservoir nbar must be finite and >= 0, got {self.nbar}")
        if self.theta is not None and not self.theta > 0:
            raise DomainError(f"reservoir theta must be > 0, got {self.theta}")

    @property
    def mean_number(self) -> float:
        if self.nbar is not None:
            return float(self.nbar)
        return thermal_occupation(self.theta)

    def to_dict(self) -> dict:
        if self.nbar is not None:
            return {"gamma": self.gamma, "nbar": self.nbar}
        return {"gamma": self.gamma, "theta": self.theta}


@dataclass(frozen=True)
class EffectiveBath:
    """Single reservoir equivalent to a set: gamma = sum gamma_k, nbar = weighted mean"""
    gamma: float
    nbar: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DegenerateBathError(f"effective bath needs gamma > 0, got {self.gamma}")
        if self.nbar < 0:
            raise DomainError(f"effective nbar must be >= 0, got {self.nbar}")


def effective_bath(reservoirs: Iterable[ReservoirSpec]) -> EffectiveBath:
    """Reduce n reservoirs to (gamma, nbar) with nbar = sum gamma_k nbar_k / gamma"""
    reservoirs = list(reservoirs)
    if not reservoirs:
        raise DegenerateBathError("empty reservoir list")
    gammas = np.array([r.gamma for r in reservoirs], dtype=float)
    nbars = np.array([r.mean_number for r in reservoirs], dtype=float)
    gamma = float(np.sum(gammas))
    if gamma == 0:
        raise DegenerateBathError("all reservoirs have gamma_k = 0")
    nbar = float(np.dot(gammas, nbars) / gamma)
    # convex combination; rounding may step just outside [min, max]
    active = nbars[gammas > 0]
    nbar = float(np.clip(nbar, active.min(), active.max()))
    return EffectiveBath(gamma=gamma, nbar=nbar)


def reservoir_weights(reservoirs: Iterable[ReservoirSpec]) -> List[float]:
    """gamma_k / gamma for each reservoir"""
    reservoirs = list(reservoirs)
    total = sum(r.gamma for r in reservoirs)
    if total == 0:
        raise DegenerateBathError("all reservoirs have gamma_k = 0")
    return [r.gamma / total for r in reservoirs]
