"""Brute-force truncated-space oracles and the verification suite."""
from .bosonic import (BosonicOracle, TruncationConfig, annihilation_expectation, bosonic_oracle,
                      bosonic_oracle_collective, bosonic_oracle_driven, mean_from_rho,
                      quasi_distribution_from_oracle, thermal_weights, truncated_annihilation)
from .suite import OracleReport, load_suite, registered_quantities, verify_suite
from .two_level import tls_oracle, tls_oracle_pure

__all__ = [
    "BosonicOracle",
    "TruncationConfig",
    "OracleReport",
    "annihilation_expectation",
    "bosonic_oracle",
    "bosonic_oracle_collective",
    "bosonic_oracle_driven",
    "load_suite",
    "mean_from_rho",
    "quasi_distribution_from_oracle",
    "registered_quantities",
    "thermal_weights",
    "tls_oracle",
    "tls_oracle_pure",
    "truncated_annihilation",
    "verify_suite",
]
