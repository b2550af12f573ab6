"""
Quantum current through the mode

    I(t) = 1/2 sum_k gamma_k |nbar_k - n(t)|

The signed per-reservoir flows gamma_k (nbar_k - n(t)) are positive for
reservoirs feeding the mode and negative for reservoirs draining it.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .bath import ReservoirSpec, effective_bath
from .exceptions import DomainError
from .mode_dynamics import ModeInitialState, mean_excitation
from .schedules import CouplingSchedule


@dataclass(frozen=True)
class CurrentReport:
    t: float
    current: float
    per_reservoir_flow: List[float] = field(default_factory=list)

    @property
    def net_flow(self) -> float:
        return float(sum(self.per_reservoir_flow))


def _flows(n_t: float, reservoirs: Sequence[ReservoirSpec]) -> List[float]:
    return [r.gamma * (r.mean_number - n_t) for r in reservoirs]


def quantum_current(t: float, init: ModeInitialState, reservoirs: Sequence[ReservoirSpec],
                    sched: Optional[CouplingSchedule] = None) -> CurrentReport:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    reservoirs = list(reservoirs)
    eff = effective_bath(reservoirs)
    n_t = float(mean_excitation(t, init, eff, sched))
    flows = _flows(n_t, reservoirs)
    return CurrentReport(t=float(t), current=0.5 * float(np.sum(np.abs(flows))),
                         per_reservoir_flow=flows)


def stationary_current(reservoirs: Sequence[ReservoirSpec]) -> float:
    """I_s = 1/2 sum_k gamma_k |nbar_k - nbar|"""
    reservoirs = list(reservoirs)
    eff = effective_bath(reservoirs)
    return 0.5 * float(np.sum(np.abs(_flows(eff.nbar, reservoirs))))


def stationary_balance(reservoirs: Sequence[ReservoirSpec]) -> float:
    """sum_k gamma_k (nbar_k - nbar); zero up to rounding"""
    reservoirs = list(reservoirs)
    eff = effective_bath(reservoirs)
    return float(np.sum(_flows(eff.nbar, reservoirs)))
