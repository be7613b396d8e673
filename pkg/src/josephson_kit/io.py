"""Deterministic CSV/JSON writers.

Every CSV starts with one ``# {json}`` provenance line carrying the tool
version and a hash of the configuration that produced it.  Floats are written
with 17 significant digits so identical inputs give byte-identical files.
"""
from __future__ import annotations

import hashlib
import io as _io
import json
from pathlib import Path

import numpy as np

from ._version import __version__

TOOL = "josephson-kit"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj, **kw) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, **kw)


def config_hash(config) -> str:
    return hashlib.sha256(dumps(config or {}).encode()).hexdigest()[:16]


def provenance(config=None, **extra):
    return {"tool": TOOL, "version": __version__, "config_hash": config_hash(config), **extra}


def fmt(value) -> str:
    if isinstance(value, (str, bytes)):
        return value if isinstance(value, str) else value.decode()
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def csv_text(columns, rows, prov=None) -> str:
    buf = _io.StringIO()
    if prov is not None:
        buf.write("# " + dumps(prov) + "\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, columns, rows, prov=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(csv_text(columns, rows, prov))
    return path


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj, indent=2) + "\n")
    return path


def read_csv(path):
    """Return (provenance, {column: array-or-list}) for a file written by write_csv."""
    lines = Path(path).read_text().splitlines()
    prov = None
    if lines and lines[0].startswith("# "):
        prov = json.loads(lines[0][2:])
        lines = lines[1:]
    columns = lines[0].split(",")
    cells = [ln.split(",") for ln in lines[1:] if ln]
    data = {}
    for j, name in enumerate(columns):
        col = [row[j] for row in cells]
        try:
            data[name] = np.array([float(v) for v in col])
        except ValueError:
            data[name] = col
    return prov, data
