"""CSV/JSON writers with byte-stable output.

Floats go to CSV with 17 significant digits; JSON uses Python's shortest
round-trip repr. Neither format carries timestamps or hostnames.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

CSV_SCHEMA = "raina_hh-summary/v1"
JSON_SCHEMA = "raina_hh-detail/v1"
FRAC_SCHEMA = "raina_hh-fracint/v1"

HH_COLUMNS = [
    "cell", "status", "kind", "rho", "lambda", "omega", "sigma", "u", "v", "seed", "n_paths", "method",
    "mean_left", "mean_middle", "mean_right", "mean_left_corr", "mean_right_corr",
    "violations_lm", "violations_mr", "hypothesis_verified", "error",
]

FRAC_COLUMNS = ["rho", "lambda", "omega", "sigma", "side", "u", "v", "x", "method", "n_paths", "mean", "variance",
                "per_path_values"]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return repr(v) if not math.isfinite(v) else f"{v:.17g}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(fmt(x) for x in value)
    return str(value)


def csv_text(rows: Iterable[dict], columns: Sequence[str], schema: str = CSV_SCHEMA) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def frac_record(kernel, side: str, u: float, v: float, x: float, estimate) -> dict:
    """One result record for a fractional-integral evaluation."""
    return {
        **kernel.params(),
        "side": side,
        "u": u,
        "v": v,
        "x": x,
        "method": estimate.method,
        "n_paths": estimate.n_paths,
        "mean": estimate.mean,
        "variance": estimate.variance,
        "per_path_values": np.asarray(estimate.per_path_values).tolist(),
    }


def write_frac_records(records: list[dict], path: str | Path) -> Path:
    """CSV when the suffix is ``.csv``, JSON otherwise."""
    path = Path(path)
    if path.suffix == ".csv":
        return write_text(path, csv_text(records, FRAC_COLUMNS, FRAC_SCHEMA))
    return write_text(path, json_text({"schema": FRAC_SCHEMA, "records": records}))


def hh_row(cell: int, report=None, *, status: str = "ok", error: str = "", params: dict | None = None) -> dict:
    if report is None:
        return {"cell": cell, "status": status, "error": error, **(params or {})}
    return {"cell": cell, "status": status, "error": error, **report.summary()}
