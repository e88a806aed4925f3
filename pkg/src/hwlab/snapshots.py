"""Binary field snapshots.

Layout, all little-endian:

    magic   4 bytes  b"HWSF"
    version uint32   1
    nx, ny  uint64
    lx, ly, p, omega, v  float64
    payload nx*ny complex128 samples, interleaved (re, im) float64,
            row-major with the x index slow.

Loading validates magic, version, payload size, and (optionally) that
the header grid matches an expected grid; mismatches fail loudly.
"""

from __future__ import annotations

import struct

import numpy as np

from .functionals import ModelParams
from .spectral import Field, Grid, PHYSICAL, to_physical

MAGIC = b"HWSF"
VERSION = 1
_HEADER = struct.Struct("<4sIQQddddd")


class SnapshotError(IOError):
    """Corrupt, truncated, or mismatched snapshot file."""


def save_snapshot(path: str, field: Field, params: ModelParams) -> None:
    g = field.grid
    vals = np.ascontiguousarray(to_physical(field).values, dtype="<c16")
    header = _HEADER.pack(MAGIC, VERSION, g.nx, g.ny, g.lx, g.ly,
                          params.p, params.omega, params.v)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(vals.tobytes())


def load_snapshot(path: str, expect_grid: Grid | None = None) -> tuple[Field, ModelParams]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SnapshotError(f"cannot read snapshot {path!r}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise SnapshotError(f"{path!r}: truncated header")
    magic, version, nx, ny, lx, ly, p, omega, v = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise SnapshotError(f"{path!r}: bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotError(f"{path!r}: unsupported version {version}")
    try:
        grid = Grid(int(nx), int(ny), lx, ly)
    except ValueError as exc:
        raise SnapshotError(f"{path!r}: invalid grid in header: {exc}") from exc
    expected = _HEADER.size + grid.nx * grid.ny * 16
    if len(raw) != expected:
        raise SnapshotError(
            f"{path!r}: payload size {len(raw) - _HEADER.size} bytes, "
            f"expected {expected - _HEADER.size}")
    if expect_grid is not None and grid != expect_grid:
        raise SnapshotError(
            f"{path!r}: snapshot grid {grid!r} does not match active {expect_grid!r}")
    vals = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).astype(np.complex128)
    field = Field(grid, vals.reshape(grid.nx, grid.ny), PHYSICAL)
    return field, ModelParams(p=p, omega=omega, v=v)
