"""Deterministic CSV/JSON table writers with a provenance header."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from . import __version__

FLOAT_FORMAT = "%.16e"  # 17 significant digits, round-trip exact for doubles


def provenance_line(config_hash: str) -> str:
    return f"# sphereosc {__version__} config_sha256={config_hash}"


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return FLOAT_FORMAT % float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if np.isfinite(f) else str(f)
    return v


def write_table(directory, stem: str, columns, rows, config_hash: str, fmt: str = "csv") -> Path:
    """Write ``rows`` under ``columns`` to ``directory/stem.{csv,json}``.

    CSV files start with a ``#`` provenance line; JSON files carry the same
    information under a ``meta`` key since JSON has no comments.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        path = directory / f"{stem}.csv"
        buf = io.StringIO()
        buf.write(provenance_line(config_hash) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_cell(v) for v in row] for row in rows)
        path.write_text(buf.getvalue())
    elif fmt == "json":
        path = directory / f"{stem}.json"
        doc = {
            "meta": {"tool": "sphereosc", "version": __version__, "config_sha256": config_hash},
            "columns": list(columns),
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def read_csv_table(path):
    """Read a table written by :func:`write_table`; returns (columns, rows of str)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    table = list(csv.reader(lines))
    return table[0], table[1:]
