"""Atomic CSV and JSON persistence of experiment records."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from importlib import resources

_CASTS = {"int": int, "float": float, "str": str}


def load_schema() -> dict:
    """Column names and types per scheme, as shipped with the package."""
    text = resources.files("pathint.harness").joinpath("schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _cell(value, kind) -> str:
    if value is None:
        return ""
    if kind == "float":
        v = float(value)
        return "" if math.isnan(v) else repr(v)
    if kind == "int":
        return str(int(value))
    return str(value)


def _json_value(value, kind):
    if value is None:
        return "" if kind == "str" else None
    if kind == "float":
        v = float(value)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if kind == "int":
        return int(value)
    return str(value)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([c for c, _ in columns])
    for r in rows:
        w.writerow([_cell(r.get(c), k) for c, k in columns])
    return buf.getvalue()


def json_text(record: dict, columns, rows) -> str:
    body = dict(record)
    body["columns"] = [{"name": c, "type": k} for c, k in columns]
    body["rows"] = [{c: _json_value(r.get(c), k) for c, k in columns} for r in rows]
    return json.dumps(body, indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path: str, text: str):
    """Write to a temporary file in the target directory, then rename over."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report(out_dir, name, record: dict, columns, rows) -> tuple:
    csv_path = os.path.join(out_dir, f"{name}.csv")
    json_path = os.path.join(out_dir, f"{name}.json")
    atomic_write(csv_path, csv_text(columns, rows))
    atomic_write(json_path, json_text(record, columns, rows))
    return csv_path, json_path


def read_csv(path, columns=None) -> list:
    """Rows of a report CSV with cells cast back to their schema types."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        types = dict(columns) if columns else {}
        out = []
        for line in reader:
            row = {}
            for name, cell in zip(header, line):
                kind = types.get(name, "str")
                row[name] = None if cell == "" and kind != "str" else _CASTS[kind](cell)
            out.append(row)
    return out


def read_json_rows(path) -> tuple:
    with open(path, encoding="utf-8") as fh:
        body = json.load(fh)
    columns = [(c["name"], c["type"]) for c in body["columns"]]
    return columns, body["rows"], body
