"""
Subcommand runners: validated run config in, CSV/JSON files out

Each runner returns the process exit status. Output files carry the resolved
config; `resolved_config.json` is written next to them so a run can be repeated
byte for byte.
"""
import logging
from pathlib import Path
from typing import Callable, Dict

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.bath import ReservoirSpec, effective_bath
from src.current import quantum_current, stationary_balance, stationary_current
from src.exceptions import ConfigError
from src.mode_dynamics import (ModeInitialState, charge_discharge_energies, ladder_coefficients,
                               mean_excitation)
from src.models.run_config import (BatteryConfig, CurrentConfig, PhaseGridConfig, SweepConfig,
                                   TlsConfig, VerifyConfig)
from src.oracle import BosonicOracle, TruncationConfig, verify_suite
from src.phase_space import (DistributionKind, default_grid, evaluate_field, gaussian_summary,
                             quadrature_integrate)
from src.tls import markov_rate, reduced_closed_form, trace_distance
from src.utils.output import print_table, write_csv, write_json

logger = logging.getLogger(__name__)

RESOLVED_CONFIG_NAME = "resolved_config.json"


def _resolved(config: BaseModel) -> dict:
    return config.model_dump(mode="json")


def _write_resolved(out_dir: Path, resolved: dict):
    write_json(out_dir / RESOLVED_CONFIG_NAME, resolved)


def run_sweep(config: SweepConfig, out_dir: Path, quiet: bool = False, **_) -> int:
    reservoirs = [r.build() for r in config.reservoirs]
    eff = effective_bath(reservoirs)
    sched = config.schedule.build(eff.gamma)
    init = config.initial_state.build()
    times = config.time_grid.times()
    n_t = np.atleast_1d(mean_excitation(times, init, eff, sched))

    columns = ["t", "n_t", "E_t", "mu_re", "mu_im"]
    for k in range(1, len(reservoirs) + 1):
        columns.append(f"nu_{k}_abs")
    rows = []
    for t, n in zip(times, n_t):
        coeffs = ladder_coefficients(float(t), sched, reservoirs, config.omega0)
        row = [t, n, config.omega0 * (n + 0.5), coeffs.mu.real, coeffs.mu.imag]
        row += [abs(nu) for nu in coeffs.nu]
        rows.append(row)

    resolved = _resolved(config)
    path = write_csv(out_dir / "sweep.csv", resolved, columns, rows)
    _write_resolved(out_dir, resolved)
    if not quiet:
        print(f"Wrote {len(rows)} time points to {path}")
    return 0


def run_phase_grid(config: PhaseGridConfig, out_dir: Path, quiet: bool = False, **_) -> int:
    reservoirs = [r.build() for r in config.reservoirs]
    eff = effective_bath(reservoirs)
    sched = config.schedule.build(eff.gamma)
    alpha0 = complex(*config.alpha0)
    kind = DistributionKind(config.grid.kind)
    t = config.grid.t

    summary = gaussian_summary(kind, t, alpha0, eff, config.omega0, sched)
    grid = default_grid(summary, config.grid.points, config.grid.half_widths)
    field = evaluate_field(kind, grid, t, alpha0, eff, config.omega0, sched)
    points = grid.points()
    rows = [[a.real, a.imag, v] for a, v in zip(points.ravel(), field.values.ravel())]

    resolved = _resolved(config)
    csv_path = write_csv(out_dir / "phase_grid.csv", resolved, ["re", "im", "value"], rows)
    write_json(out_dir / "phase_grid.json", {
        "summary": summary.to_dict(),
        "grid": grid.to_dict(),
        "normalization": quadrature_integrate(field),
        "second_moment": quadrature_integrate(field, moment=1),
    }, resolved)
    _write_resolved(out_dir, resolved)
    if not quiet:
        print(f"Wrote {grid.n_re}x{grid.n_im} {kind.value} grid to {csv_path}")
    return 0


def run_current(config: CurrentConfig, out_dir: Path, quiet: bool = False,
                stationary: bool = False, **_) -> int:
    reservoirs = [r.build() for r in config.reservoirs]
    eff = effective_bath(reservoirs)
    sched = config.schedule.build(eff.gamma)
    resolved = _resolved(config)

    if stationary:
        current = stationary_current(reservoirs)
        path = write_json(out_dir / "current_stationary.json", {
            "I_s": current,
            "nbar": eff.nbar,
            "balance": stationary_balance(reservoirs),
        }, resolved)
        _write_resolved(out_dir, resolved)
        if not quiet:
            print(f"Stationary current I_s = {current} (nbar = {eff.nbar}) -> {path}")
        return 0

    for name in ("initial_state", "time_grid"):
        if getattr(config, name) is None:
            raise ConfigError(f"time-series current needs '{name}' (or use --stationary)",
                              field_path=name)
    init = config.initial_state.build()
    columns = ["t", "I_t"] + [f"flow_{k}" for k in range(1, len(reservoirs) + 1)]
    rows = []
    for t in config.time_grid.times():
        report = quantum_current(float(t), init, reservoirs, sched)
        rows.append([report.t, report.current] + report.per_reservoir_flow)
    path = write_csv(out_dir / "current.csv", resolved, columns, rows)
    _write_resolved(out_dir, resolved)
    if not quiet:
        print(f"Wrote {len(rows)} time points to {path}")
    return 0


def run_tls(config: TlsConfig, out_dir: Path, quiet: bool = False, **_) -> int:
    system = config.system.build()
    bath1, bath2 = config.bath1.build(), config.bath2.build()
    sched = config.schedule.build(bath1.gamma + bath2.gamma)
    compare = config.system_compare.build() if config.system_compare else None

    # sigma(t) is only defined for diagonal initial states
    with_sigma = compare is not None and system.c == 0 and compare.c == 0
    columns = ["t", "rho_pp", "rho_pm_re", "rho_pm_im", "rho_pm_abs"]
    if compare is not None:
        columns.append("trace_distance")
    if with_sigma:
        columns.append("sigma")
    rows = []
    for t in config.time_grid.times():
        t = float(t)
        reduced = reduced_closed_form(system, bath1, bath2, t, config.omega0, sched)
        rho_pm = reduced.rho_pm
        row = [t, reduced.a, rho_pm.real, rho_pm.imag, abs(rho_pm)]
        if compare is not None:
            other = reduced_closed_form(compare, bath1, bath2, t, config.omega0, sched)
            row.append(trace_distance(reduced, other))
        if with_sigma:
            row.append(markov_rate(t, system, compare, bath1.gamma, bath2.gamma, sched))
        rows.append(row)

    resolved = _resolved(config)
    path = write_csv(out_dir / "tls.csv", resolved, columns, rows)
    _write_resolved(out_dir, resolved)
    if not quiet:
        print(f"Wrote {len(rows)} time points to {path}")
    return 0


def run_battery(config: BatteryConfig, out_dir: Path, quiet: bool = False, **_) -> int:
    times = config.time_grid.times()
    e_a, e_b = charge_discharge_energies(times, config.n, config.gamma)
    columns = ["t", "tau", "E_a", "E_b"]
    rows = [[t, config.gamma * t, a, b] for t, a, b in zip(times, e_a, e_b)]

    if config.oracle:
        trunc = TruncationConfig(fock_cutoff=config.fock_cutoff) if config.fock_cutoff \
            else TruncationConfig()
        oracle = BosonicOracle(ModeInitialState.fock(config.n),
                               [ReservoirSpec(gamma=config.gamma, nbar=0.0)], None, 1.0, trunc)
        columns += ["E_a_oracle", "E_b_oracle"]
        for row, t in zip(tqdm(rows, desc="Oracle", unit="t", disable=quiet), times):
            row += list(oracle.mode_means(float(t)))

    resolved = _resolved(config)
    path = write_csv(out_dir / "battery.csv", resolved, columns, rows)
    _write_resolved(out_dir, resolved)
    if not quiet:
        print(f"Wrote {len(rows)} time points to {path}")
    return 0


def run_verify(config: VerifyConfig, out_dir: Path, quiet: bool = False,
               max_workers: int = None, **_) -> int:
    reports = verify_suite(config, max_workers=max_workers, show_progress=not quiet)
    passed = all(r.passed for r in reports)
    resolved = _resolved(config)
    path = write_json(out_dir / "verify_report.json", {
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }, resolved)
    _write_resolved(out_dir, resolved)

    if not quiet:
        print()
        print("=" * 60)
        print("Verification summary")
        print("=" * 60)
        print_table(
            ["#", "quantity", "abs_error", "rel_error", "tolerance", "status"],
            [[r.index, r.quantity,
              "-" if r.abs_error is None else f"{r.abs_error:.3e}",
              "-" if r.rel_error is None else f"{r.rel_error:.3e}",
              f"{r.tolerance:.1e}",
              "PASS" if r.passed else ("ERROR" if r.error else "FAIL")]
             for r in reports],
        )
        failed = sum(1 for r in reports if not r.passed)
        print(f"\nChecks: {len(reports)}  Passed: {len(reports) - failed}  Failed: {failed}")
        print(f"Report: {path}")
    return 0 if passed else 2


RUNNERS: Dict[str, Callable[..., int]] = {
    "sweep": run_sweep,
    "phase-grid": run_phase_grid,
    "current": run_current,
    "tls": run_tls,
    "battery": run_battery,
    "verify": run_verify,
}


def run(subcommand: str, config: BaseModel, out_dir: Path, **options) -> int:
    """Dispatch a validated run config to its subcommand"""
    logger.debug("running %s into %s", subcommand, out_dir)
    return RUNNERS[subcommand](config, Path(out_dir), **options)
