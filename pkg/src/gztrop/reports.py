"""Deterministic report writing and matrix JSON interchange.

CSV reports carry a header row and one record per measurement; floats are
printed with 17 significant digits so identical configurations produce byte
identical files.  JSON reports bundle the configuration, the rows, and the
summary.  Matrices travel as {"n": int, "re": [[...]], "im": [[...]]} with
row-major arrays.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import DomainError
from .linalg import hermitian_part


def format_value(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    if x is None:
        return ""
    return str(x)


def rows_to_csv(fieldnames: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([format_value(row.get(name)) for name in fieldnames])
    return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def report_json(kind: str, config: dict, rows: list[dict], summary: dict) -> str:
    payload = {
        "kind": kind,
        "config": _plain(config),
        "rows": _plain(rows),
        "summary": _plain(summary),
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def write_report(
    kind: str,
    config: dict,
    fieldnames: list[str],
    rows: list[dict],
    summary: dict,
    out: str | None,
    fmt: str = "csv",
) -> str | None:
    """Serialize the report; written to `out` when given, else returned."""
    if fmt == "csv":
        text = rows_to_csv(fieldnames, rows)
    elif fmt == "json":
        text = report_json(kind, config, rows, summary)
    else:
        raise DomainError(f"unknown report format {fmt!r} (expected csv or json)")
    if out is None:
        return text
    Path(out).write_text(text)
    return None


def matrix_to_json_dict(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def matrix_from_json_dict(payload: dict, hermitian: bool = True) -> np.ndarray:
    try:
        n = int(payload["n"])
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"matrix JSON must carry n, re, im: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise DomainError(f"matrix arrays must be {n} x {n}")
    m = re + 1j * im
    if hermitian:
        scale = 1.0 + float(np.max(np.abs(m))) if m.size else 1.0
        if np.max(np.abs(m - m.conj().T)) > 1e-12 * scale:
            raise DomainError("matrix JSON is not Hermitian to 1e-12")
        m = hermitian_part(m)
    return m


def load_matrix(path: str, hermitian: bool = True) -> np.ndarray:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read matrix JSON from {path}: {exc}") from exc
    return matrix_from_json_dict(payload, hermitian=hermitian)


def save_matrix(path: str, m: np.ndarray) -> None:
    Path(path).write_text(json.dumps(matrix_to_json_dict(m), sort_keys=True, indent=1) + "\n")
