"""File formats: signal binary, CSV tables with a config comment, JSON reports.

Every writer produces byte-identical output for identical inputs.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from altes.chirplet import AnalyticSignal, Spectrum
from altes.errors import AltesError

SIGNAL_MAGIC = b"ALTS"
SIGNAL_VERSION = 1
_HEADER = struct.Struct("<4sIQd8x")  # magic, version, length, dt, padding -> 32 bytes


class FormatError(AltesError):
    pass


def fmt(x) -> str:
    """Shortest round-tripping text for a number."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, obj) -> Path:
    Path(path).write_text(dumps_json(obj))
    return Path(path)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence], config: dict | None = None) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        if config is not None:
            fh.write("# config: " + json.dumps(_jsonable(config), sort_keys=True, allow_nan=False) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return path


def read_csv(path: Path) -> tuple[dict | None, list[str], list[list[str]]]:
    """Returns (config, header, rows) for a file written by :func:`write_csv`."""
    config = None
    with Path(path).open(newline="") as fh:
        first = fh.readline()
        if first.startswith("# config: "):
            config = json.loads(first[len("# config: "):])
        else:
            fh.seek(0)
        r = csv.reader(fh)
        header = next(r)
        rows = list(r)
    return config, header, rows


def write_signal(path: Path, sig: AnalyticSignal) -> Path:
    x = np.ascontiguousarray(sig.samples, dtype=np.complex128)
    inter = np.empty(2 * len(x), dtype="<f8")
    inter[0::2] = x.real
    inter[1::2] = x.imag
    with Path(path).open("wb") as fh:
        fh.write(_HEADER.pack(SIGNAL_MAGIC, SIGNAL_VERSION, len(x), float(sig.dt)))
        fh.write(inter.tobytes())
    return Path(path)


def read_signal(path: Path) -> AnalyticSignal:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError("file shorter than the signal header")
    magic, version, n, dt = _HEADER.unpack_from(data)
    if magic != SIGNAL_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != SIGNAL_VERSION:
        raise FormatError(f"unsupported version {version}")
    body = np.frombuffer(data, dtype="<f8", offset=_HEADER.size)
    if len(body) != 2 * n:
        raise FormatError(f"expected {n} samples, found {len(body) / 2:g}")
    return AnalyticSignal(samples=body[0::2] + 1j * body[1::2], dt=dt)


def write_signal_csv(path: Path, sig: AnalyticSignal, config: dict | None = None) -> Path:
    x = sig.samples
    return write_csv(path, ["index", "real", "imag"], ((i, v.real, v.imag) for i, v in enumerate(x)), config)


def write_spectrum_csv(path: Path, s: Spectrum, config: dict | None = None) -> Path:
    mag = np.abs(s.values)
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag)
    rows = (
        (w, v.real, v.imag, m, d if math.isfinite(d) else "-inf", math.atan2(v.imag, v.real))
        for w, v, m, d in zip(s.omega, s.values, mag, db)
    )
    return write_csv(path, ["omega", "real", "imag", "magnitude", "magnitude_db", "phase"], rows, config)


def write_grid_csv(
    path: Path,
    row_name: str,
    row_values: Sequence[float],
    col_name: str,
    col_values: Sequence[float],
    grid: np.ndarray,
    config: dict | None = None,
) -> Path:
    """Long-format table (row, column, magnitude) of a 2-D magnitude grid."""
    grid = np.asarray(grid)
    rows = ((r, c, grid[i, j]) for i, r in enumerate(row_values) for j, c in enumerate(col_values))
    return write_csv(path, [row_name, col_name, "magnitude"], rows, config)
