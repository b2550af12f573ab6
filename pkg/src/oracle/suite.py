"""
Verification suite: closed forms against the brute-force oracles

A suite is a list of checks, each naming a registered quantity, its parameters,
an optional parameter grid (cartesian product, overriding `params`) and a
tolerance. Every grid point yields one OracleReport; reports come back in config
order whatever the completion order of the worker threads.
"""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ValidationError
from tqdm import tqdm

from ..bath import ReservoirSpec, effective_bath
from ..config.settings import settings
from ..current import quantum_current
from ..exceptions import ConfigError, DomainError, DynamicsError, UnknownQuantityError
from ..mode_dynamics import (InitialKind, ModeInitialState, charge_discharge_energies,
                             driven_mean_amplitude, mean_excitation)
from ..models.run_config import (CheckBlock, InitialStateBlock, ReservoirBlock, ScheduleBlock,
                                 TlsBathBlock, TlsSystemBlock, VerifyConfig)
from ..phase_space import (DistributionKind, antinormal_second_moment, coherent_center,
                           husimi_q, pn_coherent, pn_fock_zero_temp, wigner_coherent, wigner_fock)
from ..tls import (pure_state_amplitudes, pure_state_reduced, reduced_closed_form,
                   stationary_state)
from .bosonic import (BosonicOracle, TruncationConfig, annihilation_expectation,
                      bosonic_oracle_driven, mean_from_rho, quasi_distribution_from_oracle)
from .two_level import EXACT, partial_trace_system, tls_oracle, tls_oracle_pure

logger = logging.getLogger(__name__)

DEFAULT_SUITE_PATH = Path(__file__).parent / "default_suite.yaml"


@dataclass
class CheckOutcome:
    closed_form: np.ndarray
    oracle: np.ndarray
    discarded_weight: float = 0.0
    fock_cutoff: Optional[int] = None


@dataclass
class OracleReport:
    index: int
    quantity: str
    params: Dict[str, Any]
    tolerance: float
    closed_form: Optional[float] = None
    oracle: Optional[float] = None
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None
    passed: bool = False
    truncation: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


CheckFunction = Callable[[Dict[str, Any], TruncationConfig], CheckOutcome]
_CHECKS: Dict[str, CheckFunction] = {}


def register_check(name: str):
    def decorator(func: CheckFunction) -> CheckFunction:
        _CHECKS[name] = func
        return func
    return decorator


def registered_quantities() -> List[str]:
    return sorted(_CHECKS)


# --- parameter helpers ---------------------------------------------------------------

def _block(model: type, data: Any, path: str) -> BaseModel:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first["loc"])
        raise ConfigError(first["msg"], field_path=f"{path}.{loc}" if loc else path)


def _require(params: Dict[str, Any], key: str) -> Any:
    if key not in params:
        raise ConfigError(f"missing parameter '{key}'", field_path=f"params.{key}")
    return params[key]


def _reservoirs(params) -> List[ReservoirSpec]:
    return [_block(ReservoirBlock, r, f"params.reservoirs.{i}").build()
            for i, r in enumerate(_require(params, "reservoirs"))]


def _initial(params) -> ModeInitialState:
    return _block(InitialStateBlock, _require(params, "initial_state"),
                  "params.initial_state").build()


def _schedule(params, gamma: float):
    block = _block(ScheduleBlock, params.get("schedule", {}), "params.schedule")
    return block.build(gamma)


def _alpha0(params) -> complex:
    value = _require(params, "alpha0")
    return complex(value[0], value[1]) if isinstance(value, (list, tuple)) else complex(value)


def _truncation(block: CheckBlock) -> TruncationConfig:
    return TruncationConfig(**block.truncation.overrides())


def _mode_setup(params):
    reservoirs = _reservoirs(params)
    eff = effective_bath(reservoirs)
    return reservoirs, eff, _schedule(params, eff.gamma)


def _outcome(closed, oracle, bosonic: Optional[BosonicOracle] = None) -> CheckOutcome:
    return CheckOutcome(
        closed_form=np.atleast_1d(np.asarray(closed, dtype=float)),
        oracle=np.atleast_1d(np.asarray(oracle, dtype=float)),
        discarded_weight=bosonic.discarded_weight if bosonic else 0.0,
        fock_cutoff=bosonic.cutoff if bosonic else None,
    )


def _complex_parts(z: complex) -> List[float]:
    return [z.real, z.imag]


# --- bosonic checks ------------------------------------------------------------------

@register_check("mean_excitation")
def _check_mean_excitation(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    init, t = _initial(params), float(_require(params, "t"))
    oracle = BosonicOracle(init, reservoirs, sched, params.get("omega0", 1.0), trunc,
                           collective=params.get("collective", False))
    return _outcome(mean_excitation(t, init, eff, sched), mean_from_rho(oracle.reduced_state(t)),
                    oracle)


@register_check("battery_energies")
def _check_battery(params, trunc):
    n, gamma = int(_require(params, "n")), float(_require(params, "gamma"))
    t = float(_require(params, "t"))
    oracle = BosonicOracle(ModeInitialState.fock(n), [ReservoirSpec(gamma=gamma, nbar=0.0)],
                           None, params.get("omega0", 1.0), trunc)
    return _outcome(charge_discharge_energies(t, n, gamma), oracle.mode_means(t), oracle)


@register_check("fock_populations")
def _check_fock_populations(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    if eff.nbar > 0:
        raise DomainError("binomial populations need zero-temperature reservoirs")
    init, t = _initial(params), float(_require(params, "t"))
    if init.kind is not InitialKind.FOCK:
        raise DomainError("binomial populations need a Fock initial state")
    oracle = BosonicOracle(init, reservoirs, sched, params.get("omega0", 1.0), trunc)
    populations = np.real(np.diag(oracle.reduced_state(t)))
    closed = [pn_fock_zero_temp(k, t, init.n, sched) for k in range(len(populations))]
    return _outcome(closed, populations, oracle)


@register_check("fock_offdiagonal")
def _check_fock_offdiagonal(params, trunc):
    reservoirs, _, sched = _mode_setup(params)
    t = float(_require(params, "t"))
    oracle = BosonicOracle(_initial(params), reservoirs, sched, params.get("omega0", 1.0), trunc)
    rho = oracle.reduced_state(t)
    off = np.abs(rho - np.diag(np.diag(rho)))
    return _outcome(0.0, float(np.max(off)), oracle)


@register_check("coherent_populations")
def _check_coherent_populations(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    alpha0, t = _alpha0(params), float(_require(params, "t"))
    oracle = BosonicOracle(ModeInitialState.coherent(alpha0), reservoirs, sched,
                           params.get("omega0", 1.0), trunc)
    n_max = int(params.get("n_max", 12))
    populations = np.real(np.diag(oracle.reduced_state(t)))[: n_max + 1]
    closed = [pn_coherent(k, t, alpha0, eff, sched) for k in range(n_max + 1)]
    return _outcome(closed, populations, oracle)


def _grid_points(center: complex, half_width: float, points: int) -> np.ndarray:
    axis = np.linspace(-half_width, half_width, points)
    re, im = np.meshgrid(center.real + axis, center.imag + axis, indexing="ij")
    return re + 1j * im


@register_check("husimi_grid")
def _check_husimi_grid(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    alpha0, t = _alpha0(params), float(_require(params, "t"))
    omega0 = params.get("omega0", 1.0)
    oracle = BosonicOracle(ModeInitialState.coherent(alpha0), reservoirs, sched, omega0, trunc)
    center = coherent_center(t, alpha0, eff, omega0, sched)
    alphas = _grid_points(center, params.get("half_width", 4.0), int(params.get("points", 33)))
    closed = husimi_q(alphas, t, alpha0, eff, omega0, sched)
    values = quasi_distribution_from_oracle(oracle.reduced_state(t), alphas, DistributionKind.HUSIMI)
    return _outcome(closed.ravel(), values.ravel(), oracle)


@register_check("wigner_coherent")
def _check_wigner_coherent(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    alpha0, t = _alpha0(params), float(_require(params, "t"))
    omega0 = params.get("omega0", 1.0)
    oracle = BosonicOracle(ModeInitialState.coherent(alpha0), reservoirs, sched, omega0, trunc)
    center = coherent_center(t, alpha0, eff, omega0, sched)
    alphas = center + np.array(params.get("offsets", [0.0, 0.5, 0.5j, -0.7 + 0.3j]), dtype=complex)
    closed = wigner_coherent(alphas, t, alpha0, eff, omega0, sched)
    values = quasi_distribution_from_oracle(oracle.reduced_state(t), alphas, DistributionKind.WIGNER)
    return _outcome(closed, values, oracle)


@register_check("wigner_fock")
def _check_wigner_fock(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    n, t = int(_require(params, "n")), float(_require(params, "t"))
    oracle = BosonicOracle(ModeInitialState.fock(n), reservoirs, sched,
                           params.get("omega0", 1.0), trunc)
    alphas = np.array(params.get("points", [0.0, 0.5, 1.0]), dtype=complex)
    closed = wigner_fock(alphas, t, n, eff, sched)
    values = quasi_distribution_from_oracle(oracle.reduced_state(t), alphas, DistributionKind.WIGNER)
    return _outcome(closed, values, oracle)


@register_check("antinormal_moment")
def _check_antinormal_moment(params, trunc):
    reservoirs, eff, sched = _mode_setup(params)
    alpha0, t = _alpha0(params), float(_require(params, "t"))
    oracle = BosonicOracle(ModeInitialState.coherent(alpha0), reservoirs, sched,
                           params.get("omega0", 1.0), trunc)
    rho = oracle.reduced_state(t)
    # <a a^dag> = <n> + 1 holds exactly on the truncated state
    moment = mean_from_rho(rho) + float(np.real(np.trace(rho)))
    return _outcome(antinormal_second_moment(t, alpha0, eff, sched), moment, oracle)


@register_check("effective_bath_equivalence")
def _check_effective_bath(params, trunc):
    reservoirs, _, sched = _mode_setup(params)
    init, t = _initial(params), float(_require(params, "t"))
    omega0 = params.get("omega0", 1.0)
    collective = BosonicOracle(init, reservoirs, sched, omega0, trunc, collective=True)
    explicit = BosonicOracle(init, reservoirs, sched, omega0, trunc)
    outcome = _outcome(mean_from_rho(collective.reduced_state(t)),
                       mean_from_rho(explicit.reduced_state(t)), explicit)
    outcome.discarded_weight = max(collective.discarded_weight, explicit.discarded_weight)
    return outcome


@register_check("quantum_current")
def _check_quantum_current(params, trunc):
    reservoirs, _, sched = _mode_setup(params)
    init, t = _initial(params), float(_require(params, "t"))
    oracle = BosonicOracle(init, reservoirs, sched, params.get("omega0", 1.0), trunc,
                           collective=True)
    n_t = mean_from_rho(oracle.reduced_state(t))
    oracle_current = 0.5 * sum(r.gamma * abs(r.mean_number - n_t) for r in reservoirs)
    return _outcome(quantum_current(t, init, reservoirs, sched).current, oracle_current, oracle)


def _drive(params) -> Callable[[np.ndarray], np.ndarray]:
    spec = params.get("drive", {})
    kind = spec.get("kind", "cosine")
    amplitude = float(spec.get("amplitude", 0.0))
    if kind == "constant":
        return lambda tp: np.full_like(np.asarray(tp, dtype=float), amplitude)
    if kind == "cosine":
        frequency = float(spec.get("frequency", 1.0))
        return lambda tp: amplitude * np.cos(frequency * np.asarray(tp, dtype=float))
    raise ConfigError(f"unknown drive kind '{kind}'", field_path="params.drive.kind")


@register_check("driven_amplitude")
def _check_driven_amplitude(params, trunc):
    reservoirs, _, sched = _mode_setup(params)
    alpha0, t = _alpha0(params), float(_require(params, "t"))
    omega0 = params.get("omega0", 1.0)
    drive = _drive(params)
    closed = driven_mean_amplitude(t, sched, reservoirs, omega0, drive, alpha0=alpha0)
    rho = bosonic_oracle_driven(ModeInitialState.coherent(alpha0), reservoirs, sched, omega0, t,
                                drive, trunc)
    outcome = _outcome(_complex_parts(closed), _complex_parts(annihilation_expectation(rho)))
    outcome.fock_cutoff = trunc.fock_cutoff
    return outcome


# --- two-level checks ----------------------------------------------------------------

def _tls_setup(params):
    system = _block(TlsSystemBlock, _require(params, "system"), "params.system").build()
    bath1 = _block(TlsBathBlock, _require(params, "bath1"), "params.bath1").build()
    bath2 = _block(TlsBathBlock, _require(params, "bath2"), "params.bath2").build()
    sched = _schedule(params, bath1.gamma + bath2.gamma)
    return system, bath1, bath2, sched


def _tls_parts(a: float, c: complex) -> List[float]:
    return [a, c.real, c.imag]


@register_check("tls_density")
def _check_tls_density(params, trunc):
    system, bath1, bath2, sched = _tls_setup(params)
    t, omega0 = float(_require(params, "t")), params.get("omega0", 1.0)
    closed = reduced_closed_form(system, bath1, bath2, t, omega0, sched)
    rho8 = tls_oracle(system, bath1, bath2, omega0, sched, t, trunc.step_count,
                      params.get("method", EXACT))
    reduced = partial_trace_system(rho8)
    return _outcome(_tls_parts(closed.a, closed.c),
                    _tls_parts(float(np.real(reduced[0, 0])), complex(reduced[1, 0])))


@register_check("tls_stationary")
def _check_tls_stationary(params, trunc):
    system, bath1, bath2, sched = _tls_setup(params)
    t, omega0 = float(_require(params, "t")), params.get("omega0", 1.0)
    reduced = partial_trace_system(tls_oracle(system, bath1, bath2, omega0, sched, t))
    return _outcome(stationary_state(system, bath1, bath2),
                    [float(np.real(reduced[0, 0])), float(abs(reduced[1, 0]))])


@register_check("tls_induced_coherence")
def _check_tls_induced_coherence(params, trunc):
    p1 = float(_require(params, "p1"))
    gamma1, gamma2 = float(_require(params, "gamma1")), float(_require(params, "gamma2"))
    t, omega0 = float(_require(params, "t")), params.get("omega0", 1.0)
    sched = _schedule(params, gamma1 + gamma2)
    closed = pure_state_reduced(p1, t, gamma1, gamma2, omega0, sched)
    psi = tls_oracle_pure(pure_state_amplitudes(p1), gamma1, gamma2, omega0, sched, t)
    reduced = partial_trace_system(np.outer(psi, psi.conj()))
    return _outcome(_tls_parts(closed.a, closed.c),
                    _tls_parts(float(np.real(reduced[0, 0])), complex(reduced[1, 0])))


# --- suite driver --------------------------------------------------------------------

@dataclass
class _Task:
    index: int
    block: CheckBlock
    params: Dict[str, Any]


def _expand(config: VerifyConfig) -> List[_Task]:
    tasks = []
    for block in config.checks:
        if block.quantity not in _CHECKS:
            raise UnknownQuantityError(block.quantity)
        keys = list(block.grid)
        for combo in product(*(block.grid[k] for k in keys)):
            params = dict(block.params)
            params.update(zip(keys, combo))
            tasks.append(_Task(index=len(tasks), block=block, params=params))
    return tasks


def _failed(report: OracleReport, error: DynamicsError) -> OracleReport:
    report.error = error.to_error_message()
    logger.warning("check %d (%s) failed: %s", report.index, report.quantity, report.error)
    return report


def _run_task(task: _Task) -> OracleReport:
    block = task.block
    report = OracleReport(index=task.index, quantity=block.quantity, params=task.params,
                          tolerance=block.tolerance)
    try:
        trunc = _truncation(block)
        outcome = _CHECKS[block.quantity](task.params, trunc)
    except DynamicsError as e:
        return _failed(report, e)
    except (TypeError, ValueError, KeyError, IndexError) as e:
        error = ConfigError(f"malformed check parameters: {e}", field_path="params")
        return _failed(report, error)
    errors = np.abs(outcome.closed_form - outcome.oracle)
    worst = int(np.argmax(errors))
    report.closed_form = float(outcome.closed_form[worst])
    report.oracle = float(outcome.oracle[worst])
    report.abs_error = float(errors[worst])
    report.rel_error = report.abs_error / max(1.0, abs(report.closed_form))
    report.passed = bool(report.rel_error <= block.tolerance)
    report.truncation = {"fock_cutoff": outcome.fock_cutoff,
                         "discarded_weight": outcome.discarded_weight}
    return report


def load_suite(path: Union[str, Path, None] = None) -> VerifyConfig:
    """Read a suite file (YAML or JSON); the packaged default suite when no path is given"""
    path = Path(path) if path else DEFAULT_SUITE_PATH
    if not path.exists():
        raise ConfigError(f"suite file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return _block(VerifyConfig, data, "suite")


def verify_suite(config: Union[VerifyConfig, Dict[str, Any]], max_workers: Optional[int] = None,
                 show_progress: bool = True) -> List[OracleReport]:
    """Run every check of the suite; reports ordered by expanded config index"""
    if not isinstance(config, VerifyConfig):
        config = _block(VerifyConfig, config, "suite")
    tasks = _expand(config)
    if not tasks:
        return []
    max_workers = max_workers or settings.VERIFY_MAX_WORKERS
    reports: List[OracleReport] = []
    with tqdm(total=len(tasks), desc="Verifying", unit="check",
              disable=not show_progress) as pbar:
        if max_workers == 1:
            for task in tasks:
                reports.append(_run_task(task))
                pbar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=max_workers) as executor:
                futures = [executor.submit(_run_task, task) for task in tasks]
                for future in as_completed(futures):
                    reports.append(future.result())
                    pbar.update(1)
    return sorted(reports, key=lambda r: r.index)
