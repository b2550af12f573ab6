"""
Command-line configuration

Priority (highest to lowest):
    1. CLI flags
    2. settings (.env / environment, see src/config/settings.py)
    3. Built-in defaults

Run parameters themselves come only from the --config file.
"""
import argparse
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import BaseModel, ValidationError

from src.config.settings import settings
from src.exceptions import ConfigError
from src.models.run_config import SUBCOMMAND_MODELS


def format_validation_error(error: ValidationError) -> ConfigError:
    """First validation problem as a ConfigError carrying the dotted field path"""
    first = error.errors()[0]
    path = ".".join(str(p) for p in first["loc"])
    return ConfigError(f"invalid config: {first['msg']}", field_path=path)


def load_run_config(subcommand: str, config_path: str) -> BaseModel:
    """Parse a YAML/JSON run file and validate it against the subcommand schema"""
    path = Path(config_path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"config file is not valid YAML/JSON: {e}")
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping at the top level")
    try:
        return SUBCOMMAND_MODELS[subcommand].model_validate(data)
    except ValidationError as e:
        raise format_validation_error(e)


class Config:
    """Parsed command line"""

    def __init__(self):
        self.subcommand = ""
        self.config_path = ""
        self.out_dir = Path(".")
        self.quiet = False
        self.verbose = False
        self.max_workers = settings.VERIFY_MAX_WORKERS
        self.stationary = False
        self.log_level = settings.LOG_LEVEL

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="python -m src.main",
            description="Exact multi-reservoir dynamics of a bosonic mode and a two-level system",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="""
Example:
  python -m src.main battery --config configs/battery.json --out results/
  python -m src.main current --config configs/current_three_baths.json --stationary
  python -m src.main verify --config src/oracle/default_suite.yaml --max-workers 4
            """
        )
        subparsers = parser.add_subparsers(dest="subcommand", required=True)
        helps = {
            "sweep": "Mean excitation, energy and ladder coefficients over a time grid",
            "phase-grid": "Husimi / Glauber-Sudarshan / Wigner values on a phase-space grid",
            "current": "Quantum current through the mode",
            "tls": "Reduced two-level state, trace distance and Markovianity rate",
            "battery": "Charge/discharge energies of the two-oscillator battery",
            "verify": "Closed forms against the brute-force oracles",
        }
        for name, text in helps.items():
            sub = subparsers.add_parser(name, help=text)
            sub.add_argument("--config", type=str, required=True,
                             help="Run file (JSON or YAML)")
            sub.add_argument("--out", type=str, default=".",
                             help="Output directory (default: current directory)")
            sub.add_argument("--quiet", action="store_true", help="No progress bars or summary")
            sub.add_argument("--verbose", action="store_true", help="Debug logging")
            sub.add_argument("--seedless", action="store_true",
                             help="Reserved: runs never draw random numbers, so this is rejected")
            if name == "current":
                sub.add_argument("--stationary", action="store_true",
                                 help="Write the stationary current instead of the time series")
            if name == "verify":
                sub.add_argument("--max-workers", type=int, default=None,
                                 help=f"Parallel checks (default from settings: {self.max_workers})")
        return parser

    def parse_args(self, argv: Optional[List[str]] = None):
        parser = self.build_parser()
        args = parser.parse_args(argv)
        if args.seedless:
            parser.error("--seedless is not supported: every run is deterministic")

        self.subcommand = args.subcommand
        self.config_path = args.config
        self.out_dir = Path(args.out)
        self.quiet = args.quiet
        self.verbose = args.verbose
        self.stationary = getattr(args, "stationary", False)
        if getattr(args, "max_workers", None) is not None:
            if args.max_workers < 1:
                parser.error("--max-workers must be >= 1")
            self.max_workers = args.max_workers
        if self.verbose:
            self.log_level = "DEBUG"

    def load_config(self) -> BaseModel:
        return load_run_config(self.subcommand, self.config_path)

    def __str__(self):
        return (
            f"Config:\n"
            f"  Subcommand: {self.subcommand}\n"
            f"  Run file: {self.config_path}\n"
            f"  Output: {self.out_dir}\n"
            f"  Max Workers: {self.max_workers}"
        )
