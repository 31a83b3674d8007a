"""Snapshot and series persistence.

Snapshot files are little-endian binary with a fixed 45-byte header

    offset  size  field
    0       4     magic  b"AXNS"
    4       1     version, currently 1
    5       4     nr  (int32)
    9       4     nz  (int32)
    13      8     R   (float64)
    21      8     Lz  (float64)
    29      8     t   (float64)
    37      8     nu  (float64)

followed by the u1, om1, psi1 arrays, each nr*nz float64 values with the
radial index varying fastest.  Round trips are bit-exact.

The series CSV has one header line (the MonitorRow column names) and one
%.17g-formatted line per row, so parsing it back reproduces every float
exactly.

All writes land in a temporary file next to the target and are renamed
into place, so a crash never leaves a partial file under the final name.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .diagnostics import COLUMNS, CriteriaSeries, MonitorRow
from .grid import EVEN, GridSpec, ScalarField, make_grid
from .kinematics import State
from .svgplot import emit_plots

MAGIC = b"AXNS"
VERSION = 1
_HEADER = struct.Struct("<4sBii4d")


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _pack_array(vals: np.ndarray) -> bytes:
    return np.asarray(vals, dtype="<f8").tobytes(order="F")


def write_snapshot(state: State, path, nu: float) -> None:
    g = state.grid
    header = _HEADER.pack(
        MAGIC, VERSION, g.nr, g.nz, g.spec.R, g.spec.Lz, state.t, nu
    )
    body = (
        _pack_array(state.u1.values)
        + _pack_array(state.omega1.values)
        + _pack_array(state.psi1.values)
    )
    _atomic_write(path, header + body)


def read_snapshot(path) -> tuple[State, float]:
    """Read one snapshot; returns (state, nu)."""
    buf = Path(path).read_bytes()
    if len(buf) < _HEADER.size:
        raise ValueError(f"truncated snapshot {path}: {len(buf)} bytes")
    magic, version, nr, nz, R, Lz, t, nu = _HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise ValueError(f"bad snapshot magic {magic!r} in {path}")
    if version != VERSION:
        raise ValueError(f"unsupported snapshot version {version} in {path}")
    expect = _HEADER.size + 3 * nr * nz * 8
    if len(buf) != expect:
        raise ValueError(
            f"snapshot {path} has {len(buf)} bytes, header implies {expect}"
        )
    grid = make_grid(GridSpec(R=R, Lz=Lz, nr=nr, nz=nz))
    n = nr * nz

    def unpack(k: int) -> np.ndarray:
        start = _HEADER.size + k * n * 8
        flat = np.frombuffer(buf, dtype="<f8", count=n, offset=start)
        return flat.reshape((nr, nz), order="F").copy()

    state = State(
        u1=ScalarField(grid, unpack(0), EVEN),
        omega1=ScalarField(grid, unpack(1), EVEN),
        psi1=ScalarField(grid, unpack(2), EVEN),
        t=t,
    )
    return state, nu


def read_snapshot_dir(dirpath) -> list[tuple[State, float]]:
    """Read every *.axns file under dirpath, sorted by name, and check
    that the sample times increase and nu is uniform."""
    paths = sorted(Path(dirpath).glob("*.axns"))
    if not paths:
        raise ValueError(f"no snapshot files in {dirpath}")
    loaded = [read_snapshot(p) for p in paths]
    nu0 = loaded[0][1]
    for (a, _), (b, nu) in zip(loaded, loaded[1:]):
        if b.t <= a.t:
            raise ValueError(
                f"snapshot times not increasing in {dirpath}: {a.t} then {b.t}"
            )
        if nu != nu0:
            raise ValueError(f"mixed nu values in {dirpath}: {nu0} and {nu}")
    return loaded


def write_series(series: CriteriaSeries, path) -> None:
    if not series.rows:
        raise ValueError("write_series: empty series")
    lines = [",".join(COLUMNS)]
    for row in series.rows:
        lines.append(",".join("%.17g" % getattr(row, c) for c in COLUMNS))
    _atomic_write(path, ("\n".join(lines) + "\n").encode("ascii"))


def read_series(path) -> list[MonitorRow]:
    text = Path(path).read_text(encoding="ascii")
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or tuple(lines[0].split(",")) != COLUMNS:
        raise ValueError(f"series file {path} has an unexpected header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(COLUMNS):
            raise ValueError(f"series file {path}: bad row {ln!r}")
        rows.append(MonitorRow(*(float(p) for p in parts)))
    return rows


class RunWriter:
    """Per-run output layout: snapshots/snap_NNNNNN.axns, series.csv,
    plots/*.svg (plots only once the series has at least two rows)."""

    def __init__(self, out_dir, cfg):
        self.root = Path(out_dir)
        self.snap_dir = self.root / "snapshots"
        self.snap_dir.mkdir(parents=True, exist_ok=True)
        self.nu = cfg.nu
        self._count = 0

    def snapshot(self, state: State) -> None:
        path = self.snap_dir / f"snap_{self._count:06d}.axns"
        write_snapshot(state, path, self.nu)
        self._count += 1

    def series(self, series: CriteriaSeries) -> None:
        if not series.rows:
            return
        write_series(series, self.root / "series.csv")
        if len(series.rows) >= 2:
            plot_dir = self.root / "plots"
            plot_dir.mkdir(parents=True, exist_ok=True)
            emit_plots(series, plot_dir)
