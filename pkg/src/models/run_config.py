"""
Run configuration schemas, one model per CLI subcommand

Every model forbids unknown keys. `build()` helpers turn validated blocks into
the immutable domain values the dynamics modules consume.
"""
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..bath import ReservoirSpec
from ..mode_dynamics import ModeInitialState
from ..schedules import CouplingSchedule
from ..tls import TlsBathSpec, TlsDensity


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScheduleBlock(StrictModel):
    kind: Literal["exponential", "constant", "tabulated"] = "exponential"
    g0: Optional[float] = None
    times: Optional[List[float]] = None
    samples: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_variant(self):
        if self.kind == "constant" and self.g0 is None:
            raise ValueError("constant schedule needs g0")
        if self.kind == "tabulated" and (self.times is None or self.samples is None):
            raise ValueError("tabulated schedule needs times and samples")
        return self

    def build(self, gamma_total: float) -> CouplingSchedule:
        if self.kind == "constant":
            return CouplingSchedule.constant(self.g0, gamma_total)
        if self.kind == "tabulated":
            return CouplingSchedule.tabulated(self.times, self.samples, gamma_total)
        return CouplingSchedule.exponential(gamma_total)


class ReservoirBlock(StrictModel):
    gamma: float = Field(ge=0)
    nbar: Optional[float] = Field(default=None, ge=0)
    theta: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_occupancy(self):
        if (self.nbar is None) == (self.theta is None):
            raise ValueError("give exactly one of nbar or theta")
        return self

    def build(self) -> ReservoirSpec:
        return ReservoirSpec(gamma=self.gamma, nbar=self.nbar, theta=self.theta)


class InitialStateBlock(StrictModel):
    kind: Literal["coherent", "fock", "mean_number"]
    alpha0: Optional[Tuple[float, float]] = None
    n: Optional[int] = Field(default=None, ge=0)
    n0: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _matching_field(self):
        required = {"coherent": "alpha0", "fock": "n", "mean_number": "n0"}[self.kind]
        if getattr(self, required) is None:
            raise ValueError(f"{self.kind} initial state needs '{required}'")
        return self

    def build(self) -> ModeInitialState:
        if self.kind == "coherent":
            return ModeInitialState.coherent(complex(*self.alpha0))
        if self.kind == "fock":
            return ModeInitialState.fock(self.n)
        return ModeInitialState.mean_number(self.n0)


class TimeGridBlock(StrictModel):
    """Either explicit `values` or `start`/`stop`/`count` (inclusive linspace)"""
    values: Optional[List[float]] = None
    start: float = 0.0
    stop: Optional[float] = None
    count: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _strictly_increasing(self):
        times = self.times()
        if len(times) == 0:
            raise ValueError("time grid is empty")
        if np.any(times < 0):
            raise ValueError("time grid must be >= 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("time grid must be strictly increasing")
        return self

    def times(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.stop is None or self.count is None:
            raise ValueError("time grid needs 'values' or both 'stop' and 'count'")
        return np.linspace(self.start, self.stop, self.count)


class TlsSystemBlock(StrictModel):
    a: float = Field(ge=0, le=1)
    c: Tuple[float, float] = (0.0, 0.0)

    def build(self) -> TlsDensity:
        return TlsDensity(a=self.a, c=complex(*self.c))


class TlsBathBlock(StrictModel):
    gamma: float = Field(ge=0)
    p: Optional[float] = Field(default=None, ge=0, le=1)
    theta: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _one_occupancy(self):
        if (self.p is None) == (self.theta is None):
            raise ValueError("give exactly one of p or theta")
        return self

    def build(self) -> TlsBathSpec:
        return TlsBathSpec(gamma=self.gamma, p=self.p, theta=self.theta)


class RunOptions(StrictModel):
    """Fields shared by every subcommand"""
    seedless: bool = False

    @field_validator("seedless")
    @classmethod
    def _no_randomness(cls, value: bool) -> bool:
        if value:
            raise ValueError("runs are deterministic; 'seedless' must be false")
        return value


class SweepConfig(RunOptions):
    schedule: ScheduleBlock = ScheduleBlock()
    reservoirs: List[ReservoirBlock] = Field(min_length=1)
    initial_state: InitialStateBlock
    omega0: float = 1.0
    time_grid: TimeGridBlock


class PhaseGridBlock(StrictModel):
    kind: Literal["husimi", "glauber_p", "wigner"] = "husimi"
    t: float = Field(ge=0)
    points: Optional[int] = Field(default=None, ge=3)
    half_widths: Optional[float] = Field(default=None, gt=0)


class PhaseGridConfig(RunOptions):
    schedule: ScheduleBlock = ScheduleBlock()
    reservoirs: List[ReservoirBlock] = Field(min_length=1)
    alpha0: Tuple[float, float]
    omega0: float = 1.0
    grid: PhaseGridBlock


class CurrentConfig(RunOptions):
    schedule: ScheduleBlock = ScheduleBlock()
    reservoirs: List[ReservoirBlock] = Field(min_length=1)
    # both unused by the stationary current
    initial_state: Optional[InitialStateBlock] = None
    time_grid: Optional[TimeGridBlock] = None


class TlsConfig(RunOptions):
    schedule: ScheduleBlock = ScheduleBlock()
    omega0: float = 1.0
    system: TlsSystemBlock
    system_compare: Optional[TlsSystemBlock] = None
    bath1: TlsBathBlock
    bath2: TlsBathBlock
    time_grid: TimeGridBlock


class BatteryConfig(RunOptions):
    n: int = Field(ge=0)
    gamma: float = Field(gt=0)
    time_grid: TimeGridBlock
    oracle: bool = False
    fock_cutoff: Optional[int] = Field(default=None, ge=2)


class TruncationBlock(StrictModel):
    fock_cutoff: Optional[int] = Field(default=None, ge=2)
    thermal_tail_tolerance: Optional[float] = Field(default=None, gt=0)
    step_count: Optional[int] = Field(default=None, ge=1)
    max_step_count: Optional[int] = Field(default=None, ge=1)
    convergence_tolerance: Optional[float] = Field(default=None, gt=0)

    def overrides(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class CheckBlock(StrictModel):
    quantity: str
    tolerance: float = Field(gt=0)
    params: Dict[str, Any] = Field(default_factory=dict)
    grid: Dict[str, List[Any]] = Field(default_factory=dict)
    truncation: TruncationBlock = TruncationBlock()


class VerifyConfig(RunOptions):
    checks: List[CheckBlock] = Field(default_factory=list)


SUBCOMMAND_MODELS = {
    "sweep": SweepConfig,
    "phase-grid": PhaseGridConfig,
    "current": CurrentConfig,
    "tls": TlsConfig,
    "battery": BatteryConfig,
    "verify": VerifyConfig,
}
