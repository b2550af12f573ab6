"""Run configuration schemas."""
from .run_config import (SUBCOMMAND_MODELS, BatteryConfig, CheckBlock, CurrentConfig,
                         PhaseGridConfig, SweepConfig, TlsConfig, VerifyConfig)

__all__ = [
    "SUBCOMMAND_MODELS",
    "BatteryConfig",
    "CheckBlock",
    "CurrentConfig",
    "PhaseGridConfig",
    "SweepConfig",
    "TlsConfig",
    "VerifyConfig",
]
