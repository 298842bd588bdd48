"""Serialization: binary matrices, CSV tables, JSON metadata sidecars.

Binary matrix layout (documented contract, version 1):

    bytes 0-7    magic b"HYBMAT01"
    bytes 8-15   rows, little-endian uint64
    bytes 16-23  cols, little-endian uint64
    bytes 24-    rows*cols float64 values, little-endian, row-major

CSV cells are written with ``repr(float)`` (shortest exact round-trip), so
identical data produces byte-identical files on every platform; ``inf`` is
the divergence sentinel and ``nan`` means not-applicable.  Metadata sidecars
are JSON with sorted keys; everything outside the ``run`` block (timestamps
and wall times) is deterministic for a fixed configuration.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

MAGIC = b"HYBMAT01"


def save_matrix_binary(path: str | Path, a: np.ndarray) -> None:
    a = np.ascontiguousarray(np.asarray(a, dtype="<f8"))
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got ndim={a.ndim}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<QQ", a.shape[0], a.shape[1]))
        fh.write(a.tobytes(order="C"))


def load_matrix_binary(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise OSError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        rows, cols = struct.unpack("<QQ", fh.read(16))
        payload = fh.read(rows * cols * 8)
    if len(payload) != rows * cols * 8:
        raise OSError(f"{path}: truncated payload")
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).copy()


def save_matrix_csv(path: str | Path, a: np.ndarray) -> None:
    """Debug CSV: one row per line, repr-formatted cells."""
    a = np.asarray(a, dtype=float)
    with open(path, "w") as fh:
        for row in np.atleast_2d(a):
            fh.write(",".join(format_cell(x) for x in row))
            fh.write("\n")


def format_cell(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Deterministic CSV writer; cells must not contain commas."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row width {len(row)} != header width {len(header)}")
            fh.write(",".join(format_cell(x) for x in row) + "\n")


def write_metadata(path: str | Path, meta: Mapping) -> None:
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def save_labeled_matrix(path: str | Path, a: np.ndarray, info: Mapping) -> None:
    """Binary matrix plus a JSON provenance sidecar (path + ".json")."""
    save_matrix_binary(path, a)
    write_metadata(str(path) + ".json", info)


def load_labeled_matrix(path: str | Path) -> tuple[np.ndarray, dict]:
    with open(str(path) + ".json") as fh:
        info = json.load(fh)
    return load_matrix_binary(path), info
