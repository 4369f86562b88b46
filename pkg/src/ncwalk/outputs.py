"""CSV and JSON writers/readers for run outputs.

Series CSV layout::

    # ncwalk-series v1
    # manifest: <file>
    # key: value            (any number of metadata lines)
    time,sigma,mean_n,ipr,...,p_<node>,...
    <rows>

Floats are written with 17 significant digits so values round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
SERIES_MAGIC = f"ncwalk-series v{SCHEMA_VERSION}"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_series_csv(path, columns: dict[str, np.ndarray], meta: dict[str, str]) -> Path:
    """Write equal-length columns with a commented metadata header."""
    path = Path(path)
    names = list(columns)
    lengths = {len(columns[c]) for c in names}
    if len(lengths) != 1:
        raise ValueError(f"columns have different lengths: {lengths}")
    buf = io.StringIO()
    buf.write(f"# {SERIES_MAGIC}\n")
    for key, value in meta.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    data = np.column_stack([np.asarray(columns[c], dtype=float) for c in names])
    for row in data:
        writer.writerow([_fmt(x) for x in row])
    path.write_text(buf.getvalue())
    return path


def read_series_csv(path) -> tuple[dict[str, str], dict[str, np.ndarray]]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != f"# {SERIES_MAGIC}":
        raise ValueError(f"{path} is not an ncwalk series file")
    meta = {}
    body_start = 1
    for body_start, line in enumerate(lines[1:], start=1):
        if not line.startswith("#"):
            break
        key, _, value = line[1:].strip().partition(":")
        meta[key.strip()] = value.strip()
    rows = list(csv.reader(lines[body_start:]))
    header, values = rows[0], np.array(rows[1:], dtype=float).reshape(-1, len(rows[0]))
    return meta, {name: values[:, k] for k, name in enumerate(header)}


def write_table_csv(path, rows: list[dict]) -> Path:
    """Flat table of scalar summaries, one dict per row."""
    path = Path(path)
    names: list[str] = []
    for row in rows:
        names.extend(k for k in row if k not in names)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) if isinstance(v, float) else v for k, v in row.items()})
    path.write_text(buf.getvalue())
    return path


def read_table_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


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


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


def dump_matrix(path, matrix: np.ndarray) -> Path:
    """Dense matrix dump: ``.npy`` binary, anything else as whitespace text."""
    path = Path(path)
    if path.suffix == ".npy":
        np.save(path, matrix)
    else:
        np.savetxt(path, matrix, fmt="%.17g")
    return path


def load_matrix(path) -> np.ndarray:
    path = Path(path)
    return np.load(path) if path.suffix == ".npy" else np.loadtxt(path, ndmin=2)
