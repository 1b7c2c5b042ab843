"""Result table emission (CSV and JSON) with atomic writes.

Column order is fixed so downstream plotting scripts remain stable:
snr_db_or_alpha,zzb_rmse_deg,crb_rmse_deg,apb_rmse_deg,rate_bps_hz,n_excluded
Floats are printed with 9 significant digits.
"""

from __future__ import annotations

import json
import os
import tempfile

from .experiments import SweepRow

CSV_HEADER = "snr_db_or_alpha,zzb_rmse_deg,crb_rmse_deg,apb_rmse_deg,rate_bps_hz,n_excluded"
_COLUMNS = (
    "snr_db_or_alpha",
    "zzb_rmse_deg",
    "crb_rmse_deg",
    "apb_rmse_deg",
    "rate_bps_hz",
    "n_excluded",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


def _row_values(row: SweepRow):
    return (
        row.x,
        row.zzb_rmse_deg,
        row.crb_rmse_deg,
        row.apb_rmse_deg,
        row.rate_bps_hz,
        row.n_excluded,
    )


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temporary file and rename, so failures never leave a
    partially written output."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(rows) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in _row_values(row)))
    return "\n".join(lines) + "\n"


def render_json(rows) -> str:
    records = []
    for row in rows:
        rec = {}
        for name, value in zip(_COLUMNS, _row_values(row)):
            if value is None or isinstance(value, int):
                rec[name] = value
            else:
                rec[name] = float(f"{value:.9g}")
        records.append(rec)
    return json.dumps(records, indent=2) + "\n"


def write_table(rows, fmt: str, path: str) -> None:
    """Emit rows as CSV or JSON; both carry identical 9-significant-digit values."""
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "json":
        text = render_json(rows)
    else:
        raise ValueError(f"unknown table format {fmt!r} (expected 'csv' or 'json')")
    try:
        atomic_write_text(path, text)
    except OSError as exc:
        raise OSError(f"failed writing table to {path}: {exc}") from exc


def parse_csv(text: str) -> list[dict]:
    """Inverse of render_csv (used by tests and the replay check)."""
    lines = [ln for ln in text.strip().split("\n") if ln]
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        rec = {}
        for key, cell in zip(header, line.split(",")):
            if cell == "":
                rec[key] = None
            elif key == "n_excluded":
                rec[key] = int(cell)
            else:
                rec[key] = float(cell)
        out.append(rec)
    return out
