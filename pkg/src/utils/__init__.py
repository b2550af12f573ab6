"""Output helpers for the command-line runs."""
from .output import config_header, format_number, print_table, write_csv, write_json

__all__ = ["config_header", "format_number", "print_table", "write_csv", "write_json"]
