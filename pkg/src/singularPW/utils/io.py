"""
Measure JSON, CSV tables and JSON reports.

Every writer goes through a temporary file in the target directory followed by
os.replace, and formats floats with %.17g, so identical runs give identical bytes.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import jax.numpy as jnp
import numpy as np
from jaxtyping import Array, Complex

from singularPW.kaczmarz.dual import FourierData
from singularPW.measure.atomic import AtomicMeasure, MuFunction
from singularPW.measure.base import Measure
from singularPW.measure.ifs import IFSMeasure
from singularPW.sampling.reconstruction import SampleSet
from singularPW.transforms.power_series import PowerSeries
from singularPW.utils.errors import InputFormatError, MeasureError

ATOMIC_KEYS = {"type", "atoms"}
IFS_KEYS = {"type", "ratio", "offsets", "probabilities", "support_bound"}


def format_number(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    # + 0.0 folds negative zero into zero
    return "%.17g" % (float(x) + 0.0)


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    """Write text to path through a temporary sibling file and os.replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return atomic_write(path, buffer.getvalue())


def json_safe(obj: Any) -> Any:
    """Recursively turn arrays, numpy/jax scalars, complex numbers and paths into JSON types."""
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (jnp.ndarray, np.ndarray)):
        arr = np.asarray(obj)
        if np.iscomplexobj(arr):
            return json_safe(np.stack([arr.real, arr.imag], axis=-1).tolist())
        return json_safe(arr.tolist()) if arr.ndim else json_safe(arr.item())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path: str | os.PathLike, payload: dict) -> Path:
    return atomic_write(path, json.dumps(json_safe(payload), indent=2, sort_keys=True) + "\n")


def _require_numbers(path: str, key: str, value: Any) -> list[float]:
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise InputFormatError(path, f"'{key}' must be a list of numbers")
    return [float(v) for v in value]


def _require_number(path: str, key: str, value: Any) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InputFormatError(path, f"'{key}' must be a number")
    return float(value)


def load_measure(path: str | os.PathLike) -> Measure:
    """
    Read a measure document:
    {"type": "atomic", "atoms": [[x, w], ...]} or
    {"type": "ifs", "ratio": r, "offsets": [...], "probabilities": [...], "support_bound": s}.

    Raises:
        InputFormatError: on unreadable JSON, unknown or missing keys, wrong types, or a
            measure that violates its invariants.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as err:
        raise InputFormatError(path, f"cannot read measure file: {err.strerror}") from err
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputFormatError(path, f"invalid JSON: {err.msg}", err.lineno) from err
    if not isinstance(doc, dict):
        raise InputFormatError(path, "the measure document must be a JSON object", 1)

    kind = doc.get("type")
    expected = {"atomic": ATOMIC_KEYS, "ifs": IFS_KEYS}.get(kind)
    if expected is None:
        raise InputFormatError(path, f"unknown measure type {kind!r}; use 'atomic' or 'ifs'")
    unknown = sorted(set(doc) - expected)
    if unknown:
        raise InputFormatError(path, f"unknown keys {unknown} for a {kind} measure")
    missing = sorted(expected - set(doc))
    if missing:
        raise InputFormatError(path, f"missing keys {missing} for a {kind} measure")

    try:
        if kind == "atomic":
            atoms = doc["atoms"]
            if not isinstance(atoms, list) or not atoms:
                raise InputFormatError(path, "'atoms' must be a non-empty list of [x, w] pairs")
            pairs = []
            for i, atom in enumerate(atoms):
                pair = _require_numbers(path, f"atoms[{i}]", atom)
                if len(pair) != 2:
                    raise InputFormatError(path, f"atoms[{i}] must be a [position, weight] pair")
                pairs.append(pair)
            return AtomicMeasure.from_atoms(pairs)
        return IFSMeasure(
            ratio=_require_number(path, "ratio", doc["ratio"]),
            offsets=_require_numbers(path, "offsets", doc["offsets"]),
            probabilities=_require_numbers(path, "probabilities", doc["probabilities"]),
            support_bound=_require_number(path, "support_bound", doc["support_bound"]),
        )
    except MeasureError as err:
        raise InputFormatError(path, str(err)) from err


def measure_to_dict(m: Measure) -> dict:
    if isinstance(m, AtomicMeasure):
        return {
            "type": "atomic",
            "atoms": [[float(x), float(w)] for x, w in zip(m.positions, m.weights)],
        }
    if isinstance(m, IFSMeasure):
        return {
            "type": "ifs",
            "ratio": float(m.ratio),
            "offsets": [float(b) for b in m.offsets],
            "probabilities": [float(p) for p in m.probabilities],
            "support_bound": float(m.support_bound),
        }
    raise TypeError(f"cannot serialize measure of type {type(m).__name__}")


def read_table(path: str | os.PathLike, header: Sequence[str]) -> list[list[float]]:
    """
    Read a numeric CSV whose first row is exactly `header` (spaces after commas allowed).

    Raises:
        InputFormatError: with the offending 1-based line on any mismatch.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8", newline="") as f:
            lines = list(csv.reader(f, skipinitialspace=True))
    except OSError as err:
        raise InputFormatError(path, f"cannot read table: {err.strerror}") from err
    if not lines or [h.strip() for h in lines[0]] != list(header):
        raise InputFormatError(path, f"expected header {', '.join(header)}", 1)
    rows = []
    for lineno, fields in enumerate(lines[1:], start=2):
        if not fields or all(not v.strip() for v in fields):
            continue
        if len(fields) != len(header):
            raise InputFormatError(
                path, f"expected {len(header)} fields, got {len(fields)}", lineno
            )
        try:
            rows.append([float(v) for v in fields])
        except ValueError as err:
            raise InputFormatError(path, f"non-numeric field: {err}", lineno) from err
    if not rows:
        raise InputFormatError(path, "table has no data rows")
    return rows


def _indexed_complex(path: str, rows: list[list[float]], name: str) -> Complex[Array, " n"]:
    for i, row in enumerate(rows):
        if row[0] != i:
            raise InputFormatError(
                path, f"{name} must run 0, 1, 2, ... without gaps; found {row[0]:g}", i + 2
            )
    return jnp.asarray([complex(row[1], row[2]) for row in rows], dtype=jnp.complex128)


def read_series(path: str | os.PathLike) -> PowerSeries:
    rows = read_table(path, ("n", "re", "im"))
    return PowerSeries(_indexed_complex(str(path), rows, "n"))


def write_series(path: str | os.PathLike, p: PowerSeries | Complex[Array, " n"]) -> Path:
    c = p.coefficients if isinstance(p, PowerSeries) else jnp.asarray(p)
    return write_csv(path, ("n", "re", "im"), ((n, v.real, v.imag) for n, v in enumerate(np.asarray(c))))


def read_samples(path: str | os.PathLike) -> SampleSet:
    rows = read_table(path, ("j", "re", "im"))
    return SampleSet(_indexed_complex(str(path), rows, "j"))


def write_samples(path: str | os.PathLike, samples: SampleSet) -> Path:
    values = np.asarray(samples.values)
    return write_csv(path, ("j", "re", "im"), ((j, v.real, v.imag) for j, v in enumerate(values)))


def read_function(path: str | os.PathLike, m: AtomicMeasure) -> MuFunction:
    """Values of an L^2(mu) function on the atoms, rows "k, re, im"."""
    rows = read_table(path, ("k", "re", "im"))
    values = _indexed_complex(str(path), rows, "k")
    if values.shape[0] != m.n_atoms:
        raise InputFormatError(
            str(path), f"{values.shape[0]} values given for a measure with {m.n_atoms} atoms"
        )
    return MuFunction(values)


def write_function(path: str | os.PathLike, f: MuFunction) -> Path:
    values = np.asarray(f.values)
    return write_csv(path, ("k", "re", "im"), ((k, v.real, v.imag) for k, v in enumerate(values)))


def read_points(path: str | os.PathLike) -> Complex[Array, " n_points"]:
    rows = read_table(path, ("re", "im"))
    return jnp.asarray([complex(re, im) for re, im in rows], dtype=jnp.complex128)


def write_fourier(path: str | os.PathLike, data: FourierData) -> Path:
    c = np.asarray(data.coefficients)
    energy = np.asarray(data.cumulative_energy())
    return write_csv(
        path,
        ("n", "re", "im", "cumulative_energy"),
        ((n, v.real, v.imag, e) for n, (v, e) in enumerate(zip(c, energy))),
    )
