"""
Output and instance file formats.

CSV
    header ``solver,checkpoint_k,flops,mean_error,median_error,trials_contributing``
    followed by one row per solver checkpoint, floats with 17 significant
    digits.
JSON
    the :class:`ExperimentResult` mapping with ``schema_version``; floats
    with 17 significant digits, so every double round-trips exactly.
Meta
    ``<name>.meta.txt``: one ``key: value`` line per environment entry.
Instance
    plain text: an optional ``#`` comment line, then ``m n``, then ``m * n``
    lines ``re im`` in row-major order.  Optional ``b`` and ``x_true``
    sections follow, each a line with the section name and then ``re im``
    lines.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..errors import InputError
from ..solvers import LinearSystem
from .experiment import ExperimentResult

__all__ = [
    "CSV_COLUMNS",
    "emit_complexity_csv",
    "emit_csv",
    "emit_json",
    "load_json",
    "read_instance",
    "write_instance",
    "write_meta",
    "write_outputs",
]

CSV_COLUMNS = ("solver", "checkpoint_k", "flops", "mean_error", "median_error", "trials_contributing")


def _num(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _open(path, mode="w"):
    path = Path(path)
    try:
        return open(path, mode, newline="" if "b" not in mode else None)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot open {path} for writing: {exc.strerror}", str(path)) from exc


def emit_csv(result: ExperimentResult, path) -> None:
    with _open(path) as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for label, rows in result.solvers.items():
            for row in rows:
                fh.write(",".join([label] + [_num(row[c]) for c in CSV_COLUMNS[1:]]) + "\n")


def _json_value(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(val, indent, level + 1)}" for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        items = [pad + _json_value(val, indent, level + 1) for val in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if v is None or isinstance(v, (bool, np.bool_)):
        return json.dumps(None if v is None else bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        s = format(v, ".17g")
        # keep floats recognizable as floats after parsing
        return s if any(ch in s for ch in ".en") else s + ".0"
    return json.dumps(v)


def emit_json(result: ExperimentResult, path) -> None:
    with _open(path) as fh:
        fh.write(_json_value(result.to_dict(), 2, 0) + "\n")


def load_json(path) -> ExperimentResult:
    with open(path) as fh:
        return ExperimentResult.from_dict(json.load(fh))


def write_meta(result: ExperimentResult, path) -> None:
    with _open(path) as fh:
        for key, val in result.environment.items():
            fh.write(f"{key}: {_num(val) if not isinstance(val, str) else val}\n")
        for label, s in result.summary.items():
            fh.write(
                f"solver {label}: reached {s['reached']}/{s['trials']}, failed {s['failed']}, "
                f"mean iterations to eps {_num(s['mean_iterations_to_eps'])}, "
                f"mean flops to eps {_num(s['mean_flops_to_eps'])}\n"
            )


def write_outputs(result: ExperimentResult, out_dir) -> dict:
    """Write ``<name>.csv``, ``<name>.json`` and ``<name>.meta.txt`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "csv": out / f"{result.name}.csv",
        "json": out / f"{result.name}.json",
        "meta": out / f"{result.name}.meta.txt",
    }
    emit_csv(result, paths["csv"])
    emit_json(result, paths["json"])
    write_meta(result, paths["meta"])
    return paths


def emit_complexity_csv(rows, path) -> None:
    """Rows of ``(y, rk, cgls)`` under the header ``y,rk_complexity,cgls_complexity``."""
    with _open(path) as fh:
        fh.write("y,rk_complexity,cgls_complexity\n")
        for row in rows:
            fh.write(",".join(_num(v) for v in row) + "\n")


def _pairs(values):
    return "".join(f"{_num(z.real)} {_num(z.imag)}\n" for z in np.asarray(values, dtype=complex).ravel())


def write_instance(system: LinearSystem, path) -> None:
    with _open(path) as fh:
        fh.write("# linear system: m n, then row-major 're im' entries\n")
        fh.write(f"{system.m} {system.n}\n")
        fh.write(_pairs(system.A))
        fh.write("b\n" + _pairs(system.b))
        if system.x_true is not None:
            fh.write("x_true\n" + _pairs(system.x_true))


def read_instance(path) -> LinearSystem:
    path = Path(path)
    try:
        lines = [ln.strip() for ln in path.read_text().splitlines()]
    except OSError as exc:
        raise InputError(f"cannot read instance {path}: {exc.strerror}") from exc
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    try:
        m, n = (int(v) for v in lines[0].split())
        pos = 1

        def take(count):
            nonlocal pos
            chunk = lines[pos:pos + count]
            if len(chunk) != count:
                raise InputError(f"{path}: expected {count} entries, file ends early")
            pos += count
            vals = np.array([[float(v) for v in ln.split()] for ln in chunk])
            if vals.shape != (count, 2):
                raise InputError(f"{path}: entries must be 're im' pairs")
            return vals[:, 0] + 1j * vals[:, 1]

        A = take(m * n).reshape(m, n)
        b = np.zeros(m, dtype=complex)
        x_true = None
        while pos < len(lines):
            section = lines[pos]
            pos += 1
            if section == "b":
                b = take(m)
            elif section == "x_true":
                x_true = take(n)
            else:
                raise InputError(f"{path}: unknown section {section!r}")
    except (ValueError, IndexError) as exc:
        raise InputError(f"{path}: malformed instance file ({exc})") from None
    return LinearSystem(A, b, x_true)
