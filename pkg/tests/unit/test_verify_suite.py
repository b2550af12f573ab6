"""
Verification suite unit tests
"""
import numpy as np
import pytest

from src.exceptions import ConfigError, UnknownQuantityError
from src.models.run_config import VerifyConfig
from src.oracle import load_suite, registered_quantities, verify_suite


def _suite(*checks) -> dict:
    return {"checks": list(checks)}


BATTERY_CHECK = {
    "quantity": "battery_energies",
    "tolerance": 1.0e-10,
    "params": {"n": 3, "gamma": 1.0},
    "grid": {"t": [0.5, 1.0]},
    "truncation": {"fock_cutoff": 6},
}

MEAN_CHECK = {
    "quantity": "mean_excitation",
    "tolerance": 1.0e-6,
    "params": {
        "initial_state": {"kind": "coherent", "alpha0": [1.0, 0.0]},
        "reservoirs": [{"gamma": 1.0, "nbar": 1.0}],
        "t": 0.7,
    },
    "truncation": {"fock_cutoff": 30},
}


class TestVerifySuite:
    """Suite expansion, ordering and pass/fail bookkeeping"""

    def test_empty_config(self):
        assert verify_suite({}) == []
        assert verify_suite(VerifyConfig()) == []

    def test_grid_expansion_and_order(self):
        reports = verify_suite(_suite(BATTERY_CHECK, MEAN_CHECK), max_workers=3,
                               show_progress=False)
        assert [r.index for r in reports] == [0, 1, 2]
        assert [r.quantity for r in reports] == ["battery_energies", "battery_energies",
                                                 "mean_excitation"]
        assert reports[0].params["t"] == 0.5
        assert reports[1].params["t"] == 1.0
        assert all(r.passed for r in reports)
        assert reports[0].truncation["fock_cutoff"] == 6

    def test_serial_matches_parallel(self):
        serial = verify_suite(_suite(BATTERY_CHECK), max_workers=1, show_progress=False)
        parallel = verify_suite(_suite(BATTERY_CHECK), max_workers=4, show_progress=False)
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]

    def test_tight_tolerance_fails_without_raising(self):
        check = dict(MEAN_CHECK, tolerance=1.0e-16)
        reports = verify_suite(_suite(check), show_progress=False)
        assert len(reports) == 1
        assert not reports[0].passed
        assert reports[0].error is None
        assert reports[0].abs_error > 0

    def test_relative_error(self):
        report = verify_suite(_suite(MEAN_CHECK), show_progress=False)[0]
        assert report.rel_error == pytest.approx(
            report.abs_error / max(1.0, abs(report.closed_form)))

    def test_unknown_quantity(self):
        with pytest.raises(UnknownQuantityError):
            verify_suite(_suite({"quantity": "entropy", "tolerance": 1.0e-6}),
                         show_progress=False)

    def test_check_error_is_reported(self):
        """A failing check becomes an error report; the rest of the suite still runs"""
        bad = {
            "quantity": "fock_populations",
            "tolerance": 1.0e-10,
            "params": {
                "initial_state": {"kind": "fock", "n": 2},
                "reservoirs": [{"gamma": 1.0, "nbar": 0.5}],
                "t": 1.0,
            },
        }
        reports = verify_suite(_suite(bad, BATTERY_CHECK), show_progress=False)
        assert len(reports) == 3
        assert not reports[0].passed
        assert reports[0].error.startswith("[domain]")
        assert reports[1].passed and reports[2].passed

    def test_missing_parameter(self):
        check = {"quantity": "battery_energies", "tolerance": 1.0e-10, "params": {"n": 3}}
        report = verify_suite(_suite(check), show_progress=False)[0]
        assert report.error.startswith("[config]")

    def test_malformed_parameter_is_reported(self):
        """A list where a number belongs becomes a [config] report in a parallel run"""
        check = dict(MEAN_CHECK, params=dict(MEAN_CHECK["params"], t=[1.0]))
        reports = verify_suite(_suite(check, BATTERY_CHECK), max_workers=2, show_progress=False)
        assert len(reports) == 3
        assert not reports[0].passed
        assert reports[0].error.startswith("[config]")
        assert "at params" in reports[0].error
        assert reports[1].passed and reports[2].passed

    def test_invalid_suite_rejected(self):
        with pytest.raises(ConfigError) as exc_info:
            verify_suite({"checks": [{"quantity": "battery_energies"}]}, show_progress=False)
        assert exc_info.value.field_path == "suite.checks.0.tolerance"

    def test_report_serializable(self):
        report = verify_suite(_suite(BATTERY_CHECK), show_progress=False)[0]
        data = report.to_dict()
        assert set(data) >= {"index", "quantity", "params", "tolerance", "closed_form", "oracle",
                             "abs_error", "rel_error", "passed", "truncation", "error"}


class TestDefaultSuite:
    def test_loads_registered_quantities(self):
        suite = load_suite()
        assert suite.checks
        assert {c.quantity for c in suite.checks} <= set(registered_quantities())

    def test_battery_acceptance_check(self):
        """|10>|0> at cutoff 20, crossing at t = ln 2, runs as part of the packaged suite"""
        suite = load_suite()
        battery = [c for c in suite.checks
                   if c.quantity == "battery_energies" and c.params.get("n") == 10]
        assert len(battery) == 1
        assert battery[0].truncation.fock_cutoff == 20
        assert any(abs(t - np.log(2.0)) < 1e-15 for t in battery[0].grid["t"])
        reports = verify_suite(VerifyConfig(checks=battery), show_progress=False)
        assert len(reports) == 4
        assert all(r.passed for r in reports), [(r.params, r.rel_error) for r in reports]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_suite(tmp_path / "missing.yaml")

    @pytest.mark.slow
    def test_default_suite_passes(self):
        reports = verify_suite(load_suite(), show_progress=False)
        failed = [(r.index, r.quantity, r.rel_error, r.error) for r in reports if not r.passed]
        assert failed == []
