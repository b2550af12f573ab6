"""
Deterministic CSV / JSON writers

Every file opens with the resolved run config as `# `-prefixed JSON lines
(sorted keys), numbers are written with 17 significant digits, lines end in LF.
"""
import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from ..config.settings import settings


def format_number(value: Any) -> str:
    """Round-trippable text for a real number"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), f".{settings.OUTPUT_DIGITS}g")


def config_header(config: Dict[str, Any]) -> List[str]:
    text = json.dumps(config, sort_keys=True, indent=2)
    return [f"# {line}" for line in text.splitlines()]


def write_csv(path: Path, config: Dict[str, Any], columns: Sequence[str],
              rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for line in config_header(config):
            f.write(line + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_number(v) for v in row])
    return path


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def write_json(path: Path, payload: Dict[str, Any], config: Dict[str, Any] = None) -> Path:
    """JSON document; the resolved config is embedded under "config" when given"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = dict(payload)
    if config is not None:
        body["config"] = config
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(_plain(body), sort_keys=True, indent=2) + "\n")
    return path


def print_table(headers: Sequence[str], rows: Sequence[Sequence[Any]]):
    """Fixed-width summary table on stdout"""
    text_rows = [[str(v) for v in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in text_rows]) for i, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    print("  ".join("-" * w for w in widths))
    for row in text_rows:
        print("  ".join(v.ljust(w) for v, w in zip(row, widths)))
