"""Snapshot and series round trips, corruption handling, run output layout."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from axns import diagnostics as dg
from axns import storage
from axns.dynamics import SolverConfig, run
from axns.grid import EVEN, GridSpec, ScalarField, make_grid, zeros_field
from axns.kinematics import State
from axns.scenarios import Scenario


def make_state(grid, rng=None, t=0.0):
    if rng is None:
        fields = [zeros_field(grid) for _ in range(3)]
    else:
        fields = [
            ScalarField(grid, rng.standard_normal((grid.nr, grid.nz)), EVEN)
            for _ in range(3)
        ]
    return State(u1=fields[0], omega1=fields[1], psi1=fields[2], t=t)


def test_snapshot_round_trip_zero(grid16, tmp_path):
    path = tmp_path / "snap.axns"
    storage.write_snapshot(make_state(grid16, t=0.5), path, nu=0.1)
    state, nu = storage.read_snapshot(path)
    assert nu == 0.1 and state.t == 0.5
    assert state.grid.nr == 16 and state.grid.nz == 16
    for f in (state.u1, state.omega1, state.psi1):
        assert np.max(np.abs(f.values)) == 0.0


@given(seed=st.integers(0, 2**32 - 1))
def test_snapshot_round_trip_bit_exact(grid32, tmp_path_factory, seed):
    rng = np.random.default_rng(seed)
    path = tmp_path_factory.mktemp("snap") / "s.axns"
    orig = make_state(grid32, rng, t=float(rng.random()))
    storage.write_snapshot(orig, path, nu=0.25)
    state, nu = storage.read_snapshot(path)
    assert state.t == orig.t and nu == 0.25
    assert np.array_equal(state.u1.values, orig.u1.values)
    assert np.array_equal(state.omega1.values, orig.omega1.values)
    assert np.array_equal(state.psi1.values, orig.psi1.values)
    assert state.grid.spec == grid32.spec


def test_snapshot_corrupt_magic(grid16, tmp_path):
    path = tmp_path / "snap.axns"
    storage.write_snapshot(make_state(grid16), path, nu=0.1)
    raw = bytearray(path.read_bytes())
    raw[:4] = b"WAT?"
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError):
        storage.read_snapshot(path)


def test_snapshot_bad_version(grid16, tmp_path):
    path = tmp_path / "snap.axns"
    storage.write_snapshot(make_state(grid16), path, nu=0.1)
    raw = bytearray(path.read_bytes())
    raw[4] = 9
    path.write_bytes(bytes(raw))
    with pytest.raises(ValueError):
        storage.read_snapshot(path)


def test_snapshot_truncated(grid16, tmp_path):
    path = tmp_path / "snap.axns"
    storage.write_snapshot(make_state(grid16), path, nu=0.1)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) // 2])
    with pytest.raises(ValueError):
        storage.read_snapshot(path)
    path.write_bytes(raw[:10])
    with pytest.raises(ValueError):
        storage.read_snapshot(path)


def test_snapshot_dir_ordering_and_checks(grid16, tmp_path, rng):
    for n, t in enumerate((0.0, 0.1, 0.2)):
        storage.write_snapshot(
            make_state(grid16, rng, t=t), tmp_path / f"snap_{n:06d}.axns", nu=0.1
        )
    out = storage.read_snapshot_dir(tmp_path)
    assert [s.t for s, _ in out] == [0.0, 0.1, 0.2]
    assert all(nu == 0.1 for _, nu in out)
    # a stray later file with earlier time breaks monotonicity
    storage.write_snapshot(
        make_state(grid16, rng, t=0.05), tmp_path / "snap_000009.axns", nu=0.1
    )
    with pytest.raises(ValueError):
        storage.read_snapshot_dir(tmp_path)


def test_snapshot_dir_mixed_nu(grid16, tmp_path):
    storage.write_snapshot(make_state(grid16, t=0.0), tmp_path / "a.axns", nu=0.1)
    storage.write_snapshot(make_state(grid16, t=0.1), tmp_path / "b.axns", nu=0.2)
    with pytest.raises(ValueError):
        storage.read_snapshot_dir(tmp_path)


def test_snapshot_dir_empty(tmp_path):
    with pytest.raises(ValueError):
        storage.read_snapshot_dir(tmp_path)


def test_series_round_trip_value_exact(grid32, tmp_path, rng):
    series = dg.CriteriaSeries.bare(nu=0.3)
    for t in (0.0, 0.5, 1.25):
        dg.sample(make_state(grid32, rng, t=t), series, nu=0.3)
    path = tmp_path / "series.csv"
    storage.write_series(series, path)
    rows = storage.read_series(path)
    assert len(rows) == 3
    for orig, back in zip(series.rows, rows):
        for name in dg.COLUMNS:
            # %.17g preserves every double exactly
            assert getattr(orig, name) == getattr(back, name)


def test_series_rejects_empty(tmp_path):
    with pytest.raises(ValueError):
        storage.write_series(dg.CriteriaSeries.bare(nu=0.1), tmp_path / "s.csv")


def test_series_rejects_foreign_header(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        storage.read_series(path)


def test_series_rejects_short_row(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text(",".join(dg.COLUMNS) + "\n1.0,2.0\n")
    with pytest.raises(ValueError):
        storage.read_series(path)


def test_run_writer_layout(tmp_path):
    spec = GridSpec(R=1.0, Lz=1.0, nr=24, nz=24)
    cfg = SolverConfig(
        nu=0.2,
        cfl=0.5,
        t_end=0.04,
        grid=spec,
        scenario=Scenario(name="gaussian_ring", amplitude=1.0),
        output_every=2,
    )
    out = tmp_path / "run"
    final, series, snaps = run(cfg, out_dir=out)
    snap_files = sorted((out / "snapshots").glob("*.axns"))
    assert len(snap_files) == len(snaps)
    assert (out / "series.csv").exists()
    back = storage.read_series(out / "series.csv")
    assert [r.t for r in back] == [r.t for r in series.rows]
    disk = storage.read_snapshot_dir(out / "snapshots")
    assert math.isclose(disk[-1][0].t, final.t, rel_tol=1e-12)
    assert np.array_equal(disk[-1][0].u1.values, final.u1.values)
    svgs = sorted((out / "plots").glob("*.svg"))
    assert len(svgs) >= 5
