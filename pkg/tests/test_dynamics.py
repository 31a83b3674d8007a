"""Tendency assembly, step-size control, and the time loop."""

import math

import numpy as np
import pytest

from axns.dynamics import BlowUpError, SolverConfig, rhs, run, stable_dt, step
from axns.grid import (
    EVEN,
    GridSpec,
    ScalarField,
    field_from_function,
    make_grid,
    zeros_field,
)
from axns.kinematics import State
from axns.scenarios import Scenario


def swirl_cfg(grid_spec, nu=1.0, cfl=0.5, t_end=1.0):
    return SolverConfig(
        nu=nu, cfl=cfl, t_end=t_end, grid=grid_spec, scenario=Scenario(name="zero")
    )


def make_state(grid, u1=None, om1=None, psi1=None, t=0.0):
    z = zeros_field(grid)
    return State(
        u1=u1 if u1 is not None else z,
        omega1=om1 if om1 is not None else z,
        psi1=psi1 if psi1 is not None else z,
        t=t,
    )


@pytest.mark.parametrize(
    "kw",
    [
        dict(nu=0.0),
        dict(nu=-0.1),
        dict(cfl=0.0),
        dict(cfl=1.5),
        dict(t_end=-1.0),
        dict(output_every=0),
        dict(s=2),
    ],
)
def test_config_validation(kw):
    base = dict(
        nu=0.1, cfl=0.5, t_end=1.0, grid=GridSpec(R=1.0, Lz=1.0, nr=8, nz=8)
    )
    base.update(kw)
    with pytest.raises(ValueError):
        SolverConfig(**base).validate()


def test_rhs_pure_swirl_diffusion(grid64):
    # u1 = cos(k z), om1 = psi1 = 0: no advection, no stretching source for
    # u1, so du1 is the discrete diffusion -mu cos(k z) with the exact
    # second-difference symbol mu = (2 - 2 cos(k dz))/dz^2; r-independence
    # kills the radial part on every ring but the wall.
    g = grid64
    k = 2 * np.pi
    u1 = field_from_function(g, lambda r, z: np.cos(k * z) + 0 * r, EVEN)
    cfg = swirl_cfg(GridSpec(R=1.0, Lz=1.0, nr=g.nr, nz=g.nz), nu=1.0)
    out = rhs(make_state(g, u1=u1), cfg, 0.0)
    mu = (2.0 - 2.0 * math.cos(k * g.dz)) / g.dz**2
    want = -mu * np.cos(k * g.z)[None, :]
    got = out.du1.values[:-1]
    assert np.allclose(got, np.broadcast_to(want, got.shape), atol=1e-11)
    assert math.isclose(mu, k**2, rel_tol=(k * g.dz) ** 2)


def test_rhs_vortex_stretching_source(grid64):
    # same state: dom1 = 2 u1 d_dz(u1) = -(sin(k dz)/dz) sin(2 k z) at every
    # node, no radial stencil involved
    g = grid64
    k = 2 * np.pi
    u1 = field_from_function(g, lambda r, z: np.cos(k * z) + 0 * r, EVEN)
    cfg = swirl_cfg(GridSpec(R=1.0, Lz=1.0, nr=g.nr, nz=g.nz), nu=0.0)
    cfg = SolverConfig(
        nu=1.0, cfl=0.5, t_end=1.0, grid=cfg.grid, scenario=cfg.scenario
    )
    out = rhs(make_state(g, u1=u1), cfg, 0.0)
    ktil = math.sin(k * g.dz) / g.dz
    want = -ktil * np.sin(2 * k * g.z)[None, :] * np.ones((g.nr, 1))
    assert np.allclose(out.domega1.values, want, atol=1e-12)


def test_rhs_swirl_stretching_term(grid32):
    # u1 constant in z, psi1 single z mode: advection vanishes for u1 only
    # through v.grad u1 = vr d_dr(u1); pick u1 r-independent so the whole
    # tendency reduces to nu lap(u1) + 2 u1 psi1_z
    g = grid32
    k = 2 * np.pi
    u1 = field_from_function(g, lambda r, z: 1.0 + 0 * r, EVEN)
    psi = field_from_function(g, lambda r, z: np.sin(k * z) + 0 * r, EVEN)
    cfg = swirl_cfg(GridSpec(R=1.0, Lz=1.0, nr=g.nr, nz=g.nz), nu=1.0)
    out = rhs(make_state(g, u1=u1, psi1=psi), cfg, 0.0)
    ktil = math.sin(k * g.dz) / g.dz
    want = 2.0 * ktil * np.cos(k * g.z)[None, :] * np.ones((g.nr, 1))
    assert np.allclose(out.du1.values[:-1], want[:-1], atol=1e-11)


def test_stable_dt_diffusive_limit():
    spec = GridSpec(R=1.0, Lz=1.0, nr=16, nz=16)
    g = make_grid(spec)
    cfg = swirl_cfg(spec, nu=1.0, cfl=0.5)
    dt = stable_dt(make_state(g), cfg)
    # dr = dz = h: h^2 h^2 / (2 nu (h^2 + h^2)) = h^2 / (4 nu)
    assert math.isclose(dt, 0.5 * g.dr**2 / 4.0, rel_tol=1e-12)


def test_stable_dt_advective_limit():
    spec = GridSpec(R=1.0, Lz=1.0, nr=16, nz=10)
    g = make_grid(spec)
    # psi1 = c gives v_z = 2c away from the wall; pick c so advection binds
    psi = field_from_function(g, lambda r, z: 5.0 + 0 * r, EVEN)
    state = make_state(g, psi1=psi)
    cfg = SolverConfig(nu=1e-6, cfl=0.5, t_end=100.0, grid=spec)
    from axns.kinematics import reconstruct_velocity

    vz_max = float(np.max(np.abs(reconstruct_velocity(state).v_z.values)))
    dt = stable_dt(state, cfg)
    assert math.isclose(dt, 0.5 * g.dz / vz_max, rel_tol=1e-12)


def test_stable_dt_inviscid_rest_state_clamps():
    # direct construction bypasses validate(), as for analytic decay checks
    spec = GridSpec(R=1.0, Lz=1.0, nr=8, nz=8)
    g = make_grid(spec)
    cfg = SolverConfig(nu=0.0, cfl=0.5, t_end=2.5, grid=spec)
    assert stable_dt(make_state(g, t=1.0), cfg) == 1.5


def test_step_fixed_point(grid16):
    spec = GridSpec(R=1.0, Lz=1.0, nr=grid16.nr, nz=grid16.nz)
    cfg = swirl_cfg(spec, nu=0.3)
    out = step(make_state(grid16), 0.01, cfg)
    assert out.t == 0.01
    for f in (out.u1, out.omega1, out.psi1):
        assert np.max(np.abs(f.values)) == 0.0


def test_step_blowup_detection(grid16):
    spec = GridSpec(R=1.0, Lz=1.0, nr=grid16.nr, nz=grid16.nz)
    cfg = swirl_cfg(spec, nu=0.3)
    # z-dependent swirl so the quadratic stretching source overflows
    huge = field_from_function(
        grid16, lambda r, z: 1e200 * np.cos(2 * np.pi * z) + 0 * r, EVEN
    )
    with np.errstate(over="ignore"), pytest.raises(BlowUpError):
        step(make_state(grid16, u1=huge, om1=huge), 1.0, cfg)


def test_run_zero_scenario_stays_zero():
    spec = GridSpec(R=1.0, Lz=1.0, nr=16, nz=16)
    cfg = SolverConfig(nu=0.5, cfl=0.5, t_end=0.05, grid=spec)
    final, series, snaps = run(cfg)
    assert math.isclose(final.t, 0.05, rel_tol=1e-12)
    assert np.max(np.abs(final.u1.values)) == 0.0
    assert series.rows[-1].E == 0.0
    assert len(snaps) == len(series.rows)


def test_run_zero_t_end_single_row():
    spec = GridSpec(R=1.0, Lz=1.0, nr=16, nz=16)
    cfg = SolverConfig(
        nu=0.1,
        cfl=0.5,
        t_end=0.0,
        grid=spec,
        scenario=Scenario(name="gaussian_ring", amplitude=1.0),
    )
    final, series, snaps = run(cfg)
    assert final.t == 0.0
    assert len(series.rows) == 1
    assert series.rows[0].E > 0.0


def test_run_decays_gaussian_ring():
    spec = GridSpec(R=1.0, Lz=1.0, nr=32, nz=32)
    cfg = SolverConfig(
        nu=0.2,
        cfl=0.5,
        t_end=0.1,
        grid=spec,
        scenario=Scenario(name="gaussian_ring", amplitude=1.0),
        output_every=5,
    )
    final, series, _ = run(cfg)
    E = [row.E for row in series.rows]
    assert len(E) >= 3
    assert E[-1] < E[0]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(E, E[1:]))
    t = [row.t for row in series.rows]
    assert all(b > a for a, b in zip(t, t[1:]))
    assert math.isclose(t[-1], 0.1, rel_tol=1e-9)
