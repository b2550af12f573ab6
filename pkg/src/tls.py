"""
Two-level system coupled to two two-level reservoirs

Standard basis |i1> (x) |i> (x) |i2> (bath1, system, bath2), ordered
    +++, ++-, +-+, +--, -++, -+-, --+, ---
The single-excitation block (++-, +-+, -++) evolves with N, the double-excitation
block (+--, -+-, --+) with M, and the two corners pick up e^{-/+ 3i w0 t/2}.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .bath import thermal_tls_population
from .exceptions import DegenerateBathError, DomainError, NormalizationError
from .schedules import CouplingSchedule, mixing_angles, population_decay_rate

logger = logging.getLogger(__name__)

# positions of the N and M blocks inside the 8x8 standard basis
N_BLOCK = (1, 2, 4)
M_BLOCK = (3, 5, 6)

BASIS_LABELS = ("+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---")

_STATE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TlsDensity:
    """Reduced two-level state [[a, conj(c)], [c, b]]"""
    a: float
    c: complex = 0j
    b: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", complex(self.c))
        if self.b is None:
            object.__setattr__(self, "b", 1.0 - self.a)
        object.__setattr__(self, "b", float(self.b))
        if abs(self.a + self.b - 1.0) > _STATE_TOLERANCE:
            raise DomainError(f"populations must sum to 1, got a={self.a}, b={self.b}")
        if self.a < -_STATE_TOLERANCE or self.b < -_STATE_TOLERANCE:
            raise DomainError(f"populations must be >= 0, got a={self.a}, b={self.b}")
        if (self.a - self.b) ** 2 + 4 * abs(self.c) ** 2 > 1 + _STATE_TOLERANCE:
            raise DomainError("state is not positive: (a-b)^2 + 4|c|^2 > 1")

    @property
    def rho_pm(self) -> complex:
        """Upper-right entry <+|rho|->"""
        return complex(np.conj(self.c))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, np.conj(self.c)], [self.c, self.b]], dtype=complex)

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "TlsDensity":
        return cls(a=float(np.real(rho[0, 0])), c=complex(rho[1, 0]), b=float(np.real(rho[1, 1])))

    def to_dict(self) -> dict:
        return {"a": self.a, "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class TlsBathSpec:
    """Thermal two-level reservoir: weight gamma and up population p (or theta = w0/T)"""
    gamma: float
    p: Optional[float] = None
    theta: Optional[float] = None

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"reservoir gamma must be finite and >= 0, got {self.gamma}")
        if (self.p is None) == (self.theta is None):
            raise DomainError("two-level reservoir needs exactly one of p or theta")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise DomainError(f"up population must lie in [0, 1], got {self.p}")
        if self.theta is not None and not self.theta > 0:
            raise DomainError(f"reservoir theta must be > 0, got {self.theta}")

    @property
    def up(self) -> float:
        if self.p is not None:
            return float(self.p)
        return thermal_tls_population(self.theta)

    @property
    def down(self) -> float:
        return 1.0 - self.up

    def density(self) -> np.ndarray:
        return np.diag([self.up, self.down]).astype(complex)

    def to_dict(self) -> dict:
        if self.p is not None:
            return {"gamma": self.gamma, "p": self.p}
        return {"gamma": self.gamma, "theta": self.theta}


@dataclass(frozen=True)
class BlockPropagator:
    entries: np.ndarray

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.entries.conj().T @ self.entries - np.eye(3))))


@dataclass(frozen=True)
class FullPropagator:
    entries: np.ndarray

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.entries.conj().T @ self.entries - np.eye(8))))

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.entries @ amplitudes


def _schedule(gamma1: float, gamma2: float, sched: Optional[CouplingSchedule]) -> CouplingSchedule:
    gamma = gamma1 + gamma2
    if gamma1 < 0 or gamma2 < 0:
        raise DomainError(f"gamma1, gamma2 must be >= 0, got {gamma1}, {gamma2}")
    if gamma == 0:
        raise DegenerateBathError("gamma1 = gamma2 = 0: the system is decoupled")
    if sched is None:
        return CouplingSchedule.exponential(gamma)
    if not np.isclose(sched.gamma_total, gamma, rtol=1e-12, atol=1e-15):
        raise DomainError(f"schedule gamma_total={sched.gamma_total} differs from gamma1+gamma2={gamma}")
    return sched


def _block(cos_g: float, sin_g: float, w_first: float, w_last: float, phase: complex) -> np.ndarray:
    """exp(-i G~ K) for the chain coupling first-middle (sqrt w_first), middle-last (sqrt w_last)

    w_first + w_last = 1; the entries are the printed closed forms.
    """
    root = np.sqrt(w_first * w_last)
    out = np.array([
        [w_last + w_first * cos_g, -1j * np.sqrt(w_first) * sin_g, root * (cos_g - 1)],
        [-1j * np.sqrt(w_first) * sin_g, cos_g, -1j * np.sqrt(w_last) * sin_g],
        [root * (cos_g - 1), -1j * np.sqrt(w_last) * sin_g, w_first + w_last * cos_g],
    ], dtype=complex)
    return phase * out


def block_propagators(t: float, gamma1: float, gamma2: float, omega0: float,
                      sched: Optional[CouplingSchedule] = None
                      ) -> Tuple[BlockPropagator, BlockPropagator]:
    """(N, M) block propagators at time t"""
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    sched = _schedule(gamma1, gamma2, sched)
    gamma = gamma1 + gamma2
    cos_g, sin_g = mixing_angles(t, sched)
    w1, w2 = gamma1 / gamma, gamma2 / gamma
    # (++-, +-+) couple through bath2, (+-+, -++) through bath1
    n_block = _block(cos_g, sin_g, w2, w1, np.exp(-0.5j * omega0 * t))
    # (+--, -+-) couple through bath1, (-+-, --+) through bath2
    m_block = _block(cos_g, sin_g, w1, w2, np.exp(0.5j * omega0 * t))
    return BlockPropagator(n_block), BlockPropagator(m_block)


def full_propagator(t: float, gamma1: float, gamma2: float, omega0: float,
                    sched: Optional[CouplingSchedule] = None) -> FullPropagator:
    n_block, m_block = block_propagators(t, gamma1, gamma2, omega0, sched)
    w = np.zeros((8, 8), dtype=complex)
    w[0, 0] = np.exp(-1.5j * omega0 * t)
    w[7, 7] = np.exp(1.5j * omega0 * t)
    w[np.ix_(N_BLOCK, N_BLOCK)] = n_block.entries
    w[np.ix_(M_BLOCK, M_BLOCK)] = m_block.entries
    return FullPropagator(w)


def evolve_pure(amplitudes: Sequence[complex], t: float, gamma1: float, gamma2: float,
                omega0: float, sched: Optional[CouplingSchedule] = None) -> np.ndarray:
    """C(t) = W(t) C(0) for the 8 standard-basis amplitudes"""
    vec = np.asarray(amplitudes, dtype=complex)
    if vec.shape != (8,):
        raise DomainError(f"expected 8 amplitudes, got shape {vec.shape}")
    norm = float(np.sum(np.abs(vec) ** 2))
    if abs(norm - 1.0) > _STATE_TOLERANCE:
        raise NormalizationError(f"amplitudes must be normalized, sum |C|^2 = {norm}")
    return full_propagator(t, gamma1, gamma2, omega0, sched).apply(vec)


def initial_density(system: TlsDensity, bath1: TlsBathSpec, bath2: TlsBathSpec) -> np.ndarray:
    """Product state rho1 (x) rhoS (x) rho2"""
    return np.kron(np.kron(bath1.density(), system.matrix()), bath2.density())


def evolve_density(system: TlsDensity, bath1: TlsBathSpec, bath2: TlsBathSpec, t: float,
                   omega0: float, sched: Optional[CouplingSchedule] = None) -> np.ndarray:
    """rho(t) = W rho(0) W^dag"""
    w = full_propagator(t, bath1.gamma, bath2.gamma, omega0, sched).entries
    return w @ initial_density(system, bath1, bath2) @ w.conj().T


def reduce_system(rho8: np.ndarray) -> TlsDensity:
    """Partial trace over both reservoirs"""
    rho8 = np.asarray(rho8, dtype=complex)
    if rho8.shape != (8, 8):
        raise DomainError(f"expected an 8x8 density matrix, got shape {rho8.shape}")
    reduced = np.einsum("aibajb->ij", rho8.reshape(2, 2, 2, 2, 2, 2))
    return TlsDensity.from_matrix(reduced)


def effective_tls_population(bath1: TlsBathSpec, bath2: TlsBathSpec) -> float:
    """pbar = (gamma1 p1 + gamma2 p2) / (gamma1 + gamma2)"""
    gamma = bath1.gamma + bath2.gamma
    if gamma == 0:
        raise DegenerateBathError("gamma1 = gamma2 = 0: the system is decoupled")
    return (bath1.gamma * bath1.up + bath2.gamma * bath2.up) / gamma


def reduced_closed_form(system: TlsDensity, bath1: TlsBathSpec, bath2: TlsBathSpec, t: float,
                        omega0: float, sched: Optional[CouplingSchedule] = None) -> TlsDensity:
    """Reduced state from the closed-form components

        rho_++ = a cos^2 G~ + pbar sin^2 G~
        rho_+- = conj(c) e^{-i w0 t} [ (p1 p2 + q1 q2) cos G~
                 + (p1 q2 + q1 p2)(2 g1 g2 + (g1 - g2)^2 cos G~ + 2 g1 g2 cos^2 G~) / (g1 + g2)^2 ]
    """
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    g1, g2 = bath1.gamma, bath2.gamma
    sched = _schedule(g1, g2, sched)
    cos_g, sin_g = mixing_angles(t, sched)
    p1, q1, p2, q2 = bath1.up, bath1.down, bath2.up, bath2.down
    pbar = effective_tls_population(bath1, bath2)
    rho_pp = system.a * cos_g ** 2 + pbar * sin_g ** 2
    gamma = g1 + g2
    mixed = (2 * g1 * g2 + (g1 - g2) ** 2 * cos_g + 2 * g1 * g2 * cos_g ** 2) / gamma ** 2
    rho_pm = (np.conj(system.c) * np.exp(-1j * omega0 * t)
              * ((p1 * p2 + q1 * q2) * cos_g + (p1 * q2 + q1 * p2) * mixed))
    return TlsDensity(a=rho_pp, c=np.conj(rho_pm))


def pure_state_reduced(p1: float, t: float, gamma1: float, gamma2: float, omega0: float = 0.0,
                       sched: Optional[CouplingSchedule] = None) -> TlsDensity:
    """Reduced system state for (sqrt(p1)|+> + sqrt(q1)|->) (x) |-> (x) |->

        rho_++ = p1 gamma1/gamma sin^2 G~
        rho_+- = -i sqrt(p1 q1 gamma1/gamma) sin G~ e^{-i w0 t}
    """
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"p1 must lie in [0, 1], got {p1}")
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    sched = _schedule(gamma1, gamma2, sched)
    _, sin_g = mixing_angles(t, sched)
    w1 = gamma1 / (gamma1 + gamma2)
    rho_pp = p1 * w1 * sin_g ** 2
    rho_pm = -1j * np.sqrt(p1 * (1 - p1) * w1) * sin_g * np.exp(-1j * omega0 * t)
    return TlsDensity(a=rho_pp, c=np.conj(rho_pm))


def pure_state_amplitudes(p1: float) -> np.ndarray:
    """sqrt(p1)|+--> + sqrt(q1)|--->"""
    amps = np.zeros(8, dtype=complex)
    amps[3] = np.sqrt(p1)
    amps[7] = np.sqrt(1 - p1)
    return amps


def stationary_state(system: TlsDensity, bath1: TlsBathSpec,
                     bath2: TlsBathSpec) -> Tuple[float, float]:
    """(rho_++(inf), |rho_+-(inf)|) once cos G~ has decayed to zero"""
    g1, g2 = bath1.gamma, bath2.gamma
    pbar = effective_tls_population(bath1, bath2)
    p1, q1, p2, q2 = bath1.up, bath1.down, bath2.up, bath2.down
    coherence = 2 * abs(system.c) * g1 * g2 * (p2 * q1 + p1 * q2) / (g1 + g2) ** 2
    return pbar, coherence


def trace_distance(rho1: TlsDensity, rho2: TlsDensity) -> float:
    """1/2 sum |eig(rho1 - rho2)| = sqrt(da^2 + |dc|^2) for 2x2 states"""
    da = rho1.a - rho2.a
    dc = rho1.c - rho2.c
    return float(min(1.0, np.sqrt(da ** 2 + abs(dc) ** 2)))


def trace_distance_diagonal(t: float, a1: float, a2: float, gamma1: float, gamma2: float,
                            sched: Optional[CouplingSchedule] = None):
    """D(t) = |a2 - a1| cos^2 G~ for two diagonal initial states"""
    sched = _schedule(gamma1, gamma2, sched)
    cos_g, _ = mixing_angles(t, sched)
    return abs(a2 - a1) * cos_g ** 2


def _require_diagonal(*states: TlsDensity):
    for state in states:
        if abs(state.c) > 0:
            raise DomainError("Markovianity rate is defined for diagonal initial states")


def markov_rate(t, rho1_0: TlsDensity, rho2_0: TlsDensity, gamma1: float, gamma2: float,
                sched: Optional[CouplingSchedule] = None):
    """sigma(t) = dD/dt = -|a2 - a1| sin(2 G~) sqrt(gamma1 + gamma2) g(t)"""
    _require_diagonal(rho1_0, rho2_0)
    sched = _schedule(gamma1, gamma2, sched)
    return abs(rho2_0.a - rho1_0.a) * population_decay_rate(t, sched)


def is_markovian(times: Sequence[float], rho1_0: TlsDensity, rho2_0: TlsDensity,
                 gamma1: float, gamma2: float, sched: Optional[CouplingSchedule] = None) -> bool:
    """True when sigma(t) <= 0 on every sampled time"""
    sigma = np.asarray(markov_rate(np.asarray(times, dtype=float), rho1_0, rho2_0,
                                   gamma1, gamma2, sched))
    positive = sigma > 0
    if np.any(positive):
        logger.debug("sigma > 0 at %d of %d sampled times", int(np.sum(positive)), sigma.size)
    return not bool(np.any(positive))
