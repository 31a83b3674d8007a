"""Self-check suites behind the ``verify`` subcommand.

Each check prints one ``[pass]``/``[FAIL]`` line; a suite succeeds when
every check passes.  The four reference runs (gaussian_ring and
pure_swirl, nu in {0.05, 0.2}, 64x64, CFL 0.5, t_end 1) are shared by
several suites and cached per process.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import diagnostics
from .diagnostics import COLUMNS, CriteriaSeries, lpq_norm, omega1_budget, quartic_check
from .dynamics import SolverConfig, run
from .elliptic import solve_stream, stream_residual
from .grid import (
    EVEN,
    GridSpec,
    ScalarField,
    d_dr,
    d_dz,
    field_from_function,
    integrate_volume,
    make_grid,
    norm_l2,
    zeros_field,
)
from .kinematics import State
from .scenarios import Scenario
from .storage import read_series, read_snapshot_dir
from .studies import (
    bump_field,
    divergence_study,
    dynamics_spatial_study,
    dynamics_temporal_study,
    elliptic_study,
    observed_order,
    random_bump_terms,
    ratio_ensemble,
    swirl_decay_error,
)

SUITES = ("ops", "elliptic", "energy", "maxprinciple", "lemma33", "mms")

ACCEPTANCE_CASES = tuple(
    (name, nu) for name in ("gaussian_ring", "pure_swirl") for nu in (0.05, 0.2)
)


@dataclass
class Reporter:
    checks: list = field(default_factory=list)

    def add(self, name: str, ok, detail: str = "") -> bool:
        ok = bool(ok)
        self.checks.append((name, ok))
        line = f"[{'pass' if ok else 'FAIL'}] {name}"
        if detail:
            line += f"  ({detail})"
        print(line)
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def acceptance_scenario(name: str) -> Scenario:
    if name == "gaussian_ring":
        return Scenario(name=name, amplitude=1.0, width=0.25, r_center=0.5, z_center=0.5)
    if name == "pure_swirl":
        return Scenario(name=name, amplitude=1.0, width=0.25, r_center=0.5, mode_k=1)
    raise ValueError(f"no reference run for scenario {name!r}")


@lru_cache(maxsize=None)
def acceptance_run(name: str, nu: float, n: int = 64):
    cfg = SolverConfig(
        nu=nu,
        cfl=0.5,
        t_end=1.0,
        grid=GridSpec(R=1.0, Lz=1.0, nr=n, nz=n),
        scenario=acceptance_scenario(name),
        output_every=5,
    )
    final, series, _ = run(cfg)
    return cfg, final, series


_INT_COLUMNS = (
    "critA_int",
    "critB_int",
    "cfz_grad_int",
    "cfz_l4_int",
    "om1_grad_int",
    "u1_l4_int",
)


def suite_ops(rep: Reporter) -> None:
    g = make_grid(GridSpec(R=1.0, Lz=1.0, nr=48, nz=32))
    vol = float(np.sum(g.quad_w)) * g.nz
    exact = np.pi * g.spec.R**2 * g.spec.Lz
    rep.add(
        "quadrature: total volume = pi R^2 Lz",
        abs(vol - exact) <= 1e-12 * exact,
        f"rel err {abs(vol - exact) / exact:.2e}",
    )
    # midpoint sum of r^2 has the closed form R^3/3 - R dr^2/12 per unit length
    got = integrate_volume(field_from_function(g, lambda r, z: r + 0.0 * z, EVEN))
    closed = 2.0 * np.pi * g.spec.Lz * (g.spec.R**3 / 3.0 - g.spec.R * g.dr**2 / 12.0)
    rep.add(
        "quadrature: int r dx matches midpoint closed form",
        abs(got - closed) <= 1e-13 * abs(closed),
        f"rel err {abs(got - closed) / closed:.2e}",
    )

    rho, w, kz = 0.3, 0.15, 3

    def f(r, z):
        return (np.exp(-(((r - rho) / w) ** 2)) + np.exp(-(((r + rho) / w) ** 2))) * np.cos(
            2.0 * np.pi * kz * z
        )

    def fr(r, z):
        return (
            -2.0 * (r - rho) / w**2 * np.exp(-(((r - rho) / w) ** 2))
            - 2.0 * (r + rho) / w**2 * np.exp(-(((r + rho) / w) ** 2))
        ) * np.cos(2.0 * np.pi * kz * z)

    def fz(r, z):
        return (
            np.exp(-(((r - rho) / w) ** 2)) + np.exp(-(((r + rho) / w) ** 2))
        ) * (-2.0 * np.pi * kz * np.sin(2.0 * np.pi * kz * z))

    errs_r, errs_z = [], []
    for n in (32, 64, 128):
        gn = make_grid(GridSpec(R=1.0, Lz=1.0, nr=n, nz=n))
        fld = field_from_function(gn, f, EVEN)
        err_r = ScalarField(gn, d_dr(fld).values - field_from_function(gn, fr, EVEN).values, EVEN)
        err_z = ScalarField(gn, d_dz(fld).values - field_from_function(gn, fz, EVEN).values, EVEN)
        errs_r.append(norm_l2(err_r))
        errs_z.append(norm_l2(err_z))
    ords_r = observed_order(errs_r)
    ords_z = observed_order(errs_z)
    rep.add(
        "stencils: radial derivative order >= 1.9",
        min(ords_r) >= 1.9,
        "orders " + ", ".join(f"{o:.3f}" for o in ords_r),
    )
    rep.add(
        "stencils: axial derivative order >= 1.9",
        min(ords_z) >= 1.9,
        "orders " + ", ".join(f"{o:.3f}" for o in ords_z),
    )

    rng = np.random.default_rng(3)
    a = ScalarField(g, rng.standard_normal((g.nr, g.nz)), EVEN)
    b = ScalarField(g, rng.standard_normal((g.nr, g.nz)), EVEN)
    lhs = integrate_volume(ScalarField(g, d_dz(a).values * b.values, EVEN))
    rhs = -integrate_volume(ScalarField(g, a.values * d_dz(b).values, EVEN))
    scale = norm_l2(a) * norm_l2(b)
    rep.add(
        "axial derivative is skew-adjoint under the quadrature",
        abs(lhs - rhs) <= 1e-12 * scale,
        f"defect {abs(lhs - rhs):.2e}",
    )

    div = divergence_study()
    div_orders = observed_order(div)
    rep.add(
        "divergence residual of reconstructed velocity: order >= 1.9",
        min(div_orders) >= 1.9,
        "orders " + ", ".join(f"{o:.3f}" for o in div_orders),
    )

    gq = make_grid(GridSpec(R=1.0, Lz=1.0, nr=24, nz=24))
    rngq = np.random.default_rng(17)
    bad = 0
    for _ in range(1000):
        terms = random_bump_terms(rngq, gq.spec.R)
        st = State(
            u1=bump_field(terms, gq),
            omega1=zeros_field(gq),
            psi1=zeros_field(gq),
            t=0.0,
        )
        lhsq, rhsq = quartic_check(st)
        if not lhsq <= rhsq:
            bad += 1
    rep.add(
        "quartic bound lhs <= rhs on 1000 random states, no tolerance",
        bad == 0,
        f"{bad} violations",
    )

    _check_lpq(rep, g)
    _check_offline_consistency(rep)


def _check_lpq(rep: Reporter, g) -> None:
    c, T = 1.375, 1.1
    vol = float(np.sum(g.quad_w)) * g.nz
    samples = [(t, ScalarField(g, np.full((g.nr, g.nz), c), EVEN)) for t in (0.0, 0.4 * T, T)]
    worst = 0.0
    for p, q in ((2.0, 2.0), (4.0, 3.0), (math.inf, 2.0), (2.0, math.inf), (math.inf, math.inf)):
        got = lpq_norm(samples, p, q)
        vp = 1.0 if math.isinf(p) else vol ** (1.0 / p)
        tq = 1.0 if math.isinf(q) else T ** (1.0 / q)
        expect = c * vp * tq
        worst = max(worst, abs(got - expect) / expect)
    rep.add(
        "space-time norm of constant field = c V^(1/p) T^(1/q)",
        worst <= 1e-12,
        f"worst rel err {worst:.2e}",
    )
    # two-level step in time: symmetric sampling makes the trapezoid exact
    c1, c2, delta = 0.75, 1.5, 1e-3
    p, q = 2.0, 3.0
    mk = lambda v: ScalarField(g, np.full((g.nr, g.nz), v), EVEN)
    step_samples = [
        (0.0, mk(c1)),
        (T / 2 - delta, mk(c1)),
        (T / 2 + delta, mk(c2)),
        (T, mk(c2)),
    ]
    got = lpq_norm(step_samples, p, q)
    expect = ((c1**q + c2**q) * vol ** (q / p) * T / 2.0) ** (1.0 / q)
    rep.add(
        "space-time norm of a two-level step matches the closed form",
        abs(got - expect) <= 1e-12 * expect,
        f"rel err {abs(got - expect) / expect:.2e}",
    )


def _check_offline_consistency(rep: Reporter) -> None:
    cfg = SolverConfig(
        nu=0.1,
        cfl=0.5,
        t_end=0.05,
        grid=GridSpec(R=1.0, Lz=1.0, nr=32, nz=32),
        scenario=Scenario(name="gaussian_ring", amplitude=1.0, width=0.25),
        output_every=3,
    )
    with tempfile.TemporaryDirectory() as tmp:
        _, live, _ = run(cfg, out_dir=tmp)
        loaded = read_snapshot_dir(Path(tmp) / "snapshots")
        offline = diagnostics.CriteriaSeries.bare(nu=cfg.nu, s=cfg.s)
        for st, nu in loaded:
            diagnostics.sample(st, offline, nu)
        stored = read_series(Path(tmp) / "series.csv")
    worst = 0.0
    ok = len(offline.rows) == len(live.rows) >= 3
    for a, b in zip(live.rows, offline.rows):
        for col in COLUMNS:
            va, vb = getattr(a, col), getattr(b, col)
            scale = max(abs(va), abs(vb), 1e-300)
            worst = max(worst, abs(va - vb) / scale)
    ok = ok and worst <= 1e-12
    rep.add(
        "offline recomputation from snapshots matches the live series",
        ok,
        f"{len(live.rows)} rows, worst rel diff {worst:.2e}",
    )
    exact = all(
        getattr(a, col) == getattr(b, col)
        for a, b in zip(live.rows, stored)
        for col in COLUMNS
    )
    rep.add("series CSV round trip is value-exact", exact)
    mono = all(
        getattr(a, col) <= getattr(b, col)
        for a, b in zip(live.rows, live.rows[1:])
        for col in _INT_COLUMNS
    )
    rep.add("running integrals are nondecreasing", mono)


def suite_elliptic(rep: Reporter) -> None:
    errors, residuals = elliptic_study()
    orders = observed_order(errors)
    rep.add(
        "stream solve recovers the closed-form solution at order >= 1.9",
        min(orders) >= 1.9,
        "orders " + ", ".join(f"{o:.3f}" for o in orders),
    )
    rep.add(
        "stream solve residual <= 1e-10 of the source norm",
        max(residuals) <= 1e-10,
        f"worst {max(residuals):.2e}",
    )
    rng = np.random.default_rng(23)
    worst = 0.0
    g = make_grid(GridSpec(R=1.0, Lz=1.0, nr=48, nz=32))
    for _ in range(5):
        om = bump_field(random_bump_terms(rng, g.spec.R), g)
        psi = solve_stream(om)
        worst = max(worst, stream_residual(psi, om) / norm_l2(om))
    rep.add(
        "stream solve residual on random sources <= 1e-10",
        worst <= 1e-10,
        f"worst {worst:.2e}",
    )
    om = bump_field(random_bump_terms(rng, g.spec.R), g)
    om = ScalarField(g, np.abs(om.values), EVEN)
    psi = solve_stream(om)
    floor = -1e-13 * float(np.max(np.abs(psi.values)))
    rep.add(
        "nonnegative vorticity gives nonnegative stream function",
        float(np.min(psi.values)) >= floor,
        f"min psi {float(np.min(psi.values)):.2e}",
    )


def suite_energy(rep: Reporter) -> None:
    for name, nu in ACCEPTANCE_CASES:
        _, _, series = acceptance_run(name, nu)
        rows = series.rows
        E0 = rows[0].E
        mono = all(b.E <= a.E * (1.0 + 1e-9) for a, b in zip(rows, rows[1:]))
        rep.add(f"{name} nu={nu}: energy non-increasing row to row", mono)
        t = np.array([r.t for r in rows])
        D = np.array([r.D for r in rows])
        diss = float(np.sum(0.5 * np.diff(t) * (D[1:] + D[:-1])))
        defect = abs(rows[-1].E - E0 + nu * diss)
        rep.add(
            f"{name} nu={nu}: |E(T) - E(0) + nu int D| <= 1e-3 E(0)",
            defect <= 1e-3 * E0,
            f"defect {defect / E0:.2e} of E(0)",
        )
        drop_ok = all(
            b.E - a.E <= -0.5 * nu * min(a.D, b.D) * (b.t - a.t) + 1e-6 * E0
            for a, b in zip(rows, rows[1:])
        )
        rep.add(f"{name} nu={nu}: per-row drop covers half the predicted dissipation", drop_ok)
        lhs, rhs = omega1_budget(series, nu)
        margin = float(np.max(lhs - 1.01 * rhs))
        rep.add(
            f"{name} nu={nu}: vorticity budget lhs <= 1.01 rhs at every row",
            bool(np.all(lhs <= 1.01 * rhs)),
            f"max excess {margin:.2e}",
        )


def suite_maxprinciple(rep: Reporter) -> None:
    for name, nu in ACCEPTANCE_CASES:
        _, _, series = acceptance_run(name, nu)
        rows = series.rows
        sup0 = rows[0].swirl_sup
        worst = max(r.swirl_sup for r in rows)
        rep.add(
            f"{name} nu={nu}: swirl maximum never exceeds its initial value",
            worst <= (1.0 + 1e-10) * sup0,
            f"max/initial - 1 = {worst / sup0 - 1.0:.2e}",
        )


def suite_lemma33(rep: Reporter) -> None:
    g64 = make_grid(GridSpec(R=1.0, Lz=1.0, nr=64, nz=64))
    g128 = make_grid(GridSpec(R=1.0, Lz=1.0, nr=128, nz=128))
    r64 = ratio_ensemble(100, g64, seed=11)
    r128 = ratio_ensemble(100, g128, seed=11)
    rep.add(
        "criteria ratio <= 2.0 on the 100-field ensemble",
        max(r64) <= 2.0 and max(r128) <= 2.0,
        f"max {max(r64):.3f} (64), {max(r128):.3f} (128)",
    )
    drift = abs(max(r128) - max(r64)) / max(r64)
    rep.add(
        "ensemble max ratio moves < 5% under refinement",
        drift < 0.05,
        f"drift {drift:.2%}",
    )
    for name, nu in ACCEPTANCE_CASES:
        _, _, series = acceptance_run(name, nu)
        ok = True
        worst = 0.0
        for row in series.rows:
            if row.critB > 0.0:
                worst = max(worst, row.critA / row.critB)
                ok = ok and row.critA <= 2.0 * row.critB
            else:
                ok = ok and row.critA == 0.0
        rep.add(
            f"{name} nu={nu}: criteria ratio <= 2.0 along the run",
            ok,
            f"max ratio {worst:.3f}",
        )


def suite_mms(rep: Reporter) -> None:
    spatial = dynamics_spatial_study()
    sp_orders = observed_order(spatial)
    rep.add(
        "forced-run recovery: spatial order >= 1.9",
        min(sp_orders) >= 1.9,
        "orders " + ", ".join(f"{o:.3f}" for o in sp_orders),
    )
    temporal = dynamics_temporal_study()
    t_orders = observed_order(temporal)
    rep.add(
        "forced-run recovery: temporal order >= 2.9",
        min(t_orders) >= 2.9,
        "orders " + ", ".join(f"{o:.3f}" for o in t_orders),
    )
    decay = swirl_decay_error()
    rep.add(
        "small-amplitude swirl decays at exp(-nu (2 pi / Lz)^2 t) to 1e-3",
        decay <= 1e-3,
        f"rel err {decay:.2e}",
    )


_SUITE_FNS = {
    "ops": suite_ops,
    "elliptic": suite_elliptic,
    "energy": suite_energy,
    "maxprinciple": suite_maxprinciple,
    "lemma33": suite_lemma33,
    "mms": suite_mms,
}


def run_suites(names) -> bool:
    rep = Reporter()
    for name in names:
        if name not in _SUITE_FNS:
            raise ValueError(f"unknown suite {name!r}")
        print(f"== suite {name} ==")
        _SUITE_FNS[name](rep)
    n_ok = sum(1 for _, ok in rep.checks if ok)
    print(f"{n_ok}/{len(rep.checks)} checks passed")
    return rep.ok
