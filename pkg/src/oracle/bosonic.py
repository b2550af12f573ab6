"""
Brute-force bosonic oracle on a truncated Fock product space

Modes: index 0 is the main oscillator, 1..k the explicit reservoir modes, each
truncated at `fock_cutoff` quanta. The drive-free Hamiltonian

    H(t) = w0 N_tot + sqrt(gamma) g(t) K,   K = sum_k sqrt(gamma_k/gamma) (a^dag b_k + a b_k^dag)

conserves N_tot, so every total-number sector is exponentiated on its own and
U(t) = exp(-i w0 t N_tot) exp(-i G~(t) K). States are carried as weighted pure
vectors (columns of `psi`), never as a dense product-space density matrix.
"""
import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, sparse
from scipy.stats import poisson

from ..bath import EffectiveBath, ReservoirSpec, effective_bath
from ..config.settings import settings
from ..exceptions import ConvergenceError, DomainError, TruncationError
from ..mode_dynamics import InitialKind, ModeInitialState, default_schedule
from ..phase_space import DistributionKind
from ..schedules import CouplingSchedule, accumulated_phase
from ..special import coherent_amplitudes, displacement_matrix

logger = logging.getLogger(__name__)

MAX_EXPLICIT_BATHS = 2
# bath configurations lighter than this are dropped and counted as discarded weight
_MIN_CONFIGURATION_WEIGHT = 1e-16

DriveInput = Union[Callable[[np.ndarray], np.ndarray], Tuple[Sequence[float], Sequence[float]]]


@dataclass(frozen=True)
class TruncationConfig:
    fock_cutoff: int = field(default_factory=lambda: settings.FOCK_CUTOFF)
    thermal_tail_tolerance: float = field(default_factory=lambda: settings.THERMAL_TAIL_TOLERANCE)
    step_count: int = field(default_factory=lambda: settings.ORACLE_STEP_COUNT)
    max_step_count: int = field(default_factory=lambda: settings.ORACLE_MAX_STEP_COUNT)
    convergence_tolerance: float = field(
        default_factory=lambda: settings.ORACLE_CONVERGENCE_TOLERANCE
    )

    def __post_init__(self):
        if self.fock_cutoff < 2:
            raise DomainError(f"fock_cutoff must be >= 2, got {self.fock_cutoff}")
        if self.step_count < 1:
            raise DomainError(f"step_count must be >= 1, got {self.step_count}")
        if self.max_step_count < self.step_count:
            raise DomainError("max_step_count must be >= step_count")
        if not self.thermal_tail_tolerance > 0:
            raise DomainError("thermal_tail_tolerance must be > 0")

    @property
    def levels(self) -> int:
        return self.fock_cutoff + 1

    def to_dict(self) -> dict:
        return {
            "fock_cutoff": self.fock_cutoff,
            "thermal_tail_tolerance": self.thermal_tail_tolerance,
            "step_count": self.step_count,
            "max_step_count": self.max_step_count,
            "convergence_tolerance": self.convergence_tolerance,
        }


def thermal_weights(nbar: float, cutoff: int,
                    tolerance: Optional[float] = None) -> Tuple[np.ndarray, float]:
    """Boltzmann weights of Fock states 0..cutoff, renormalized, and the discarded tail"""
    tolerance = tolerance if tolerance is not None else settings.THERMAL_TAIL_TOLERANCE
    weights = np.zeros(cutoff + 1)
    if nbar == 0:
        weights[0] = 1.0
        return weights, 0.0
    ratio = nbar / (1 + nbar)
    weights[:] = (1 - ratio) * ratio ** np.arange(cutoff + 1)
    discarded = ratio ** (cutoff + 1)
    if discarded > tolerance:
        required = int(np.ceil(np.log(tolerance) / np.log(ratio))) - 1
        raise TruncationError(
            f"thermal state with nbar={nbar} does not fit in cutoff {cutoff}",
            discarded_weight=float(discarded),
            required_cutoff=required,
        )
    return weights / weights.sum(), float(discarded)


def truncated_annihilation(levels: int) -> sparse.csr_matrix:
    """a on span{|0>, ..., |levels-1>}"""
    return sparse.diags(np.sqrt(np.arange(1, levels)), offsets=1, format="csr")


class ProductSpace:
    """Fock product space of `n_modes` modes with `levels` states each (mode 0 slowest)"""

    def __init__(self, n_modes: int, levels: int):
        self.n_modes = n_modes
        self.levels = levels
        self.dim = levels ** n_modes
        self.occupations = np.indices((levels,) * n_modes).reshape(n_modes, -1).T
        self.total = self.occupations.sum(axis=1)

    def annihilation(self, mode: int) -> sparse.csr_matrix:
        eye = sparse.identity(self.levels, format="csr")
        factors = [eye] * self.n_modes
        factors[mode] = truncated_annihilation(self.levels)
        return reduce(lambda x, y: sparse.kron(x, y, format="csr"), factors)

    def sectors(self) -> List[Tuple[int, np.ndarray]]:
        return [(int(n), np.flatnonzero(self.total == n)) for n in np.unique(self.total)]


def exchange_generator(space: ProductSpace, weights: Sequence[float]) -> sparse.csr_matrix:
    """K = sum_k sqrt(w_k) (a^dag b_k + a b_k^dag)"""
    a = space.annihilation(0)
    out = sparse.csr_matrix((space.dim, space.dim), dtype=float)
    for k, w in enumerate(weights, start=1):
        b = space.annihilation(k)
        hop = a.T @ b
        out = out + np.sqrt(w) * (hop + hop.T)
    return out.tocsr()


class SectorEigenbasis:
    """Eigendecomposition of K restricted to each total-number sector"""

    def __init__(self, space: ProductSpace, generator: sparse.csr_matrix):
        self.space = space
        self.blocks = []
        for n, idx in space.sectors():
            block = generator[idx][:, idx].toarray()
            values, vectors = linalg.eigh(block)
            self.blocks.append((n, idx, values, vectors))

    def to_eigenbasis(self, psi: np.ndarray) -> List[np.ndarray]:
        return [vectors.conj().T @ psi[idx] for _, idx, _, vectors in self.blocks]

    def from_eigenbasis(self, coeffs: List[np.ndarray], phase: float,
                        free_phase: float) -> np.ndarray:
        """Fock-basis vectors after exp(-i free_phase N_tot) exp(-i phase K)"""
        out = np.zeros((self.space.dim,) + coeffs[0].shape[1:], dtype=complex)
        for (n, idx, values, vectors), c in zip(self.blocks, coeffs):
            rot = np.exp(-1j * (phase * values + free_phase * n))
            out[idx] = vectors @ (rot[:, None] * c)
        return out

    def dense(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(V, eigenvalues, sector number per eigenvector) as full-space arrays"""
        dim = self.space.dim
        basis = np.zeros((dim, dim))
        values = np.zeros(dim)
        numbers = np.zeros(dim)
        for n, idx, vals, vectors in self.blocks:
            basis[np.ix_(idx, idx)] = vectors
            values[idx] = vals
            numbers[idx] = n
        return basis, values, numbers


def _coherent_cutoff_hint(alpha0: complex, tolerance: float) -> int:
    return int(poisson.isf(tolerance, abs(alpha0) ** 2)) + 1


def _system_ensemble(init: ModeInitialState, trunc: TruncationConfig):
    """(weights, column vectors, discarded weight) for the main-mode initial state"""
    levels = trunc.levels
    if init.kind is InitialKind.COHERENT:
        vec = coherent_amplitudes(init.alpha0, levels)
        norm = float(np.sum(np.abs(vec) ** 2))
        discarded = max(0.0, 1.0 - norm)
        if discarded > trunc.thermal_tail_tolerance:
            raise TruncationError(
                f"coherent state alpha0={init.alpha0} does not fit in cutoff {trunc.fock_cutoff}",
                discarded_weight=discarded,
                required_cutoff=_coherent_cutoff_hint(init.alpha0, trunc.thermal_tail_tolerance),
            )
        return np.array([1.0]), (vec / np.sqrt(norm))[:, None], discarded
    if init.kind is InitialKind.FOCK:
        if init.n > trunc.fock_cutoff:
            raise TruncationError(f"Fock state |{init.n}> lies above cutoff {trunc.fock_cutoff}",
                                  discarded_weight=1.0, required_cutoff=init.n)
        vec = np.zeros((levels, 1), dtype=complex)
        vec[init.n, 0] = 1.0
        return np.array([1.0]), vec, 0.0
    weights, discarded = thermal_weights(init.n0, trunc.fock_cutoff, trunc.thermal_tail_tolerance)
    keep = np.flatnonzero(weights > 0)
    return weights[keep], np.eye(levels, dtype=complex)[:, keep], discarded


def _bath_configurations(nbars: Sequence[float], trunc: TruncationConfig):
    """Product Fock configurations of the reservoir modes with their weights"""
    per_mode = []
    discarded = 0.0
    for nbar in nbars:
        weights, tail = thermal_weights(nbar, trunc.fock_cutoff, trunc.thermal_tail_tolerance)
        per_mode.append(weights)
        discarded += tail
    configs = []
    dropped = 0.0
    for occ in product(*(np.flatnonzero(w > 0) for w in per_mode)):
        weight = float(np.prod([w[o] for w, o in zip(per_mode, occ)]))
        if weight < _MIN_CONFIGURATION_WEIGHT:
            dropped += weight
            continue
        configs.append((weight, occ))
    total = sum(w for w, _ in configs)
    return [(w / total, occ) for w, occ in configs], discarded + dropped


class BosonicOracle:
    """Exact truncated evolution of the mode and up to two explicit reservoir modes

    With `collective=True` (or more than two coupled reservoirs) the reservoirs are
    replaced by a single mode in the thermal state of the effective bath.
    """

    def __init__(self, init: ModeInitialState, reservoirs: Sequence[ReservoirSpec],
                 sched: Optional[CouplingSchedule], omega0: float,
                 trunc: Optional[TruncationConfig] = None, collective: bool = False):
        reservoirs = list(reservoirs)
        self.eff: EffectiveBath = effective_bath(reservoirs)
        self.sched = default_schedule(self.eff.gamma, sched)
        self.omega0 = omega0
        self.trunc = trunc or TruncationConfig()
        coupled = [r for r in reservoirs if r.gamma > 0]
        if collective or len(coupled) > MAX_EXPLICIT_BATHS:
            if not collective:
                logger.info("%d coupled reservoirs: using the collective mode", len(coupled))
            weights, nbars = [1.0], [self.eff.nbar]
        else:
            weights = [r.gamma / self.eff.gamma for r in coupled]
            nbars = [r.mean_number for r in coupled]
        self.space = ProductSpace(1 + len(weights), self.trunc.levels)
        self.generator = exchange_generator(self.space, weights)
        self.eigenbasis = SectorEigenbasis(self.space, self.generator)

        sys_weights, sys_vectors, sys_discarded = _system_ensemble(init, self.trunc)
        configs, bath_discarded = _bath_configurations(nbars, self.trunc)
        self.discarded_weight = sys_discarded + bath_discarded
        self.weights, self.psi0 = self._assemble(sys_weights, sys_vectors, configs)
        self._coeffs = self.eigenbasis.to_eigenbasis(self.psi0)
        logger.debug("bosonic oracle: dim=%d members=%d discarded=%.3e",
                     self.space.dim, len(self.weights), self.discarded_weight)

    def _assemble(self, sys_weights, sys_vectors, configs):
        levels = self.trunc.levels
        n_baths = self.space.n_modes - 1
        rest = levels ** n_baths
        strides = levels ** np.arange(n_baths - 1, -1, -1)
        columns = len(sys_weights) * len(configs)
        psi = np.zeros((self.space.dim, columns), dtype=complex)
        weights = np.zeros(columns)
        col = 0
        for ws, vec in zip(sys_weights, sys_vectors.T):
            for wb, occ in configs:
                offset = int(np.dot(strides, occ))
                psi[np.arange(levels) * rest + offset, col] = vec
                weights[col] = ws * wb
                col += 1
        return weights, psi

    @property
    def cutoff(self) -> int:
        return self.trunc.fock_cutoff

    def state(self, t: float) -> np.ndarray:
        """Ensemble vectors at time t"""
        if t < 0:
            raise DomainError(f"time must be >= 0, got {t}")
        if t == 0:
            return self.psi0.copy()
        phase = float(accumulated_phase(t, self.sched))
        return self.eigenbasis.from_eigenbasis(self._coeffs, phase, self.omega0 * t)

    def reduced_state(self, t: float) -> np.ndarray:
        return reduce_to_mode(self.state(t), self.weights, self.trunc.levels)

    def mode_means(self, t: float) -> np.ndarray:
        """<n_k> for every mode of the product space, main mode first"""
        probs = np.abs(self.state(t)) ** 2 @ self.weights
        return self.space.occupations.T @ probs


def reduce_to_mode(psi: np.ndarray, weights: np.ndarray, levels: int) -> np.ndarray:
    """rho_S = sum_j w_j tr_baths |psi_j><psi_j|"""
    x = psi.reshape(levels, -1, psi.shape[1])
    return np.einsum("arj,brj,j->ab", x, x.conj(), weights)


def bosonic_oracle(init: ModeInitialState, reservoirs: Sequence[ReservoirSpec],
                   sched: Optional[CouplingSchedule], omega0: float, t: float,
                   trunc: Optional[TruncationConfig] = None) -> np.ndarray:
    """Reduced density matrix of the mode at time t (Fock basis)"""
    return BosonicOracle(init, reservoirs, sched, omega0, trunc).reduced_state(t)


def bosonic_oracle_collective(init: ModeInitialState, reservoirs: Sequence[ReservoirSpec],
                              sched: Optional[CouplingSchedule], omega0: float, t: float,
                              trunc: Optional[TruncationConfig] = None) -> np.ndarray:
    """Same as bosonic_oracle with the reservoirs replaced by one effective thermal mode"""
    return BosonicOracle(init, reservoirs, sched, omega0, trunc, collective=True).reduced_state(t)


def _drive_callable(f_ext: DriveInput) -> Callable[[np.ndarray], np.ndarray]:
    if callable(f_ext):
        return f_ext
    times = np.asarray(f_ext[0], dtype=float)
    values = np.asarray(f_ext[1], dtype=float)
    return lambda tp: np.interp(tp, times, values)


def _observables(rho: np.ndarray) -> np.ndarray:
    amp = annihilation_expectation(rho)
    return np.array([amp.real, amp.imag, mean_from_rho(rho)])


class _DrivenStepper:
    """Strang splitting: half drive kick, exact drive-free step over [t_j, t_j+1], half kick"""

    def __init__(self, oracle: BosonicOracle, drive: Callable[[np.ndarray], np.ndarray]):
        self.oracle = oracle
        self.drive = drive
        self.basis, self.values, self.numbers = oracle.eigenbasis.dense()
        levels = oracle.trunc.levels
        a = truncated_annihilation(levels).toarray()
        self.x_values, self.x_vectors = linalg.eigh(a + a.T)

    def _kick(self, psi: np.ndarray, theta: float) -> np.ndarray:
        levels = self.oracle.trunc.levels
        u = (self.x_vectors * np.exp(-1j * theta * self.x_values)) @ self.x_vectors.T
        shaped = psi.reshape(levels, -1)
        return (u @ shaped).reshape(psi.shape)

    def run(self, t: float, steps: int) -> np.ndarray:
        grid = np.linspace(0.0, t, steps + 1)
        phases = np.asarray(accumulated_phase(grid, self.oracle.sched))
        d_phase = np.diff(phases)
        dt = t / steps
        f_mid = np.broadcast_to(np.asarray(self.drive((grid[:-1] + grid[1:]) / 2), dtype=float),
                                (steps,))
        free = self.oracle.omega0 * dt * self.numbers
        psi = self._kick(self.oracle.psi0, f_mid[0] * dt / 2)
        for j in range(steps):
            coeffs = self.basis.T @ psi
            coeffs *= np.exp(-1j * (d_phase[j] * self.values + free))[:, None]
            psi = self.basis @ coeffs
            theta = (f_mid[j] + f_mid[j + 1]) * dt / 2 if j + 1 < steps else f_mid[j] * dt / 2
            psi = self._kick(psi, theta)
        return reduce_to_mode(psi, self.oracle.weights, self.oracle.trunc.levels)


def bosonic_oracle_driven(init: ModeInitialState, reservoirs: Sequence[ReservoirSpec],
                          sched: Optional[CouplingSchedule], omega0: float, t: float,
                          f_ext: DriveInput, trunc: Optional[TruncationConfig] = None,
                          step_count: Optional[int] = None) -> np.ndarray:
    """Reduced state under H(t) + f_ext(t)(a + a^dag), stepped until halving dt stops mattering

    Reservoirs enter through the collective mode, which leaves rho_S unchanged.
    """
    trunc = trunc or TruncationConfig()
    oracle = BosonicOracle(init, reservoirs, sched, omega0, trunc, collective=True)
    if t == 0:
        return oracle.reduced_state(0.0)
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    stepper = _DrivenStepper(oracle, _drive_callable(f_ext))
    steps = step_count or trunc.step_count
    coarse = stepper.run(t, steps)
    while True:
        if 2 * steps > trunc.max_step_count:
            raise ConvergenceError(
                f"driven evolution not converged within {trunc.max_step_count} steps",
                details=f"last step count {steps}",
            )
        fine = stepper.run(t, 2 * steps)
        change = float(np.max(np.abs(_observables(fine) - _observables(coarse))))
        logger.debug("driven oracle: %d -> %d steps, change %.3e", steps, 2 * steps, change)
        if change < trunc.convergence_tolerance:
            break
        steps, coarse = 2 * steps, fine
    edge = float(np.real(fine[-1, -1]))
    if edge > trunc.thermal_tail_tolerance:
        logger.warning("driven state reaches the cutoff: top level population %.3e", edge)
    return fine


def mean_from_rho(rho: np.ndarray) -> float:
    """tr[rho a^dag a]"""
    return float(np.real(np.sum(np.arange(rho.shape[0]) * np.diag(rho))))


def annihilation_expectation(rho: np.ndarray) -> complex:
    """tr[rho a] = sum_m sqrt(m+1) rho_{m+1,m}"""
    m = np.arange(rho.shape[0] - 1)
    return complex(np.sum(np.sqrt(m + 1) * rho[m + 1, m]))


def _quasi_point(rho: np.ndarray, alpha: complex, kind: DistributionKind) -> float:
    dim = rho.shape[0]
    if kind is DistributionKind.HUSIMI:
        vec = coherent_amplitudes(alpha, dim)
        return float(np.real(vec.conj() @ rho @ vec) / np.pi)
    parity = (-1.0) ** np.arange(dim)
    disp = displacement_matrix(dim, 2 * alpha)
    return float(2 / np.pi * np.real(np.sum(rho * (disp.T * parity[:, None]))))


def quasi_distribution_from_oracle(rho: np.ndarray, alpha, kind: DistributionKind):
    """Q = <alpha|rho|alpha>/pi or W = (2/pi) tr[rho D(2 alpha) Parity] of a truncated state"""
    kind = DistributionKind(kind)
    if kind is DistributionKind.GLAUBER_P:
        raise DomainError("the P-function has no pointwise truncated-space estimator")
    alphas = np.asarray(alpha, dtype=complex)
    cutoff = rho.shape[0] - 1
    if np.any(np.abs(alphas) ** 2 > cutoff / 4):
        logger.warning("|alpha|^2 up to %.3g exceeds cutoff/4 = %.3g; truncation may bias %s",
                       float(np.max(np.abs(alphas)) ** 2), cutoff / 4, kind.value)
    values = np.array([_quasi_point(rho, a, kind) for a in alphas.ravel()])
    if alphas.ndim == 0:
        return float(values[0])
    return values.reshape(alphas.shape)
