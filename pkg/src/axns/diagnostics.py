"""Monitor functionals and the per-run criteria series.

One MonitorRow per sampled time, columns in this fixed order:

    t            sample time
    E            kinetic energy (1/2) int |v|^2 dx
    D            dissipation integral int |grad v|^2 + (v_r/r)^2 + (v_phi/r)^2 dx
    critA        int v_r^2 / r^3 dx  = 2 pi int (d_dz psi1)^2 dr dz
    critB        int om_phi^2 / r dx = 2 pi int r^2 om1^2 dr dz
    critA_int    trapezoid of critA over the rows so far
    critB_int    trapezoid of critB over the rows so far
    swirl_sup    max |r^2 u1|
    cfz_l2       int w^2 dx with w = v_phi^2 / r = r u1^2  (squared L2 norm)
    cfz_grad_int trapezoid of int |grad w|^2 dx
    cfz_l4_int   trapezoid of int u1^4 dx ( = ||v_phi/r||_L4^4 )
    phi_l2       || -d_dz(u1) ||_L2
    gamma_l2     || om1 ||_L2
    om1_l2       || om1 ||_L2 volume norm (same value as gamma_l2; kept as
                 its own column so the vorticity budget reads off one name)
    om1_grad_int trapezoid of int |grad om1|^2 dx
    u1_l4_int    trapezoid of int u1^4 dx
    ualpha_s     int |u_alpha|^s dx with u_alpha = r^(2 - alpha) u1, alpha = 3/s
    quartic_lhs  int v_phi^4 dx
    quartic_rhs  swirl_sup^2 int u1^2 dx

No functional divides by r pointwise: the 1/r weights are absorbed into
the reduced variables (v_r/r = -d_dz(psi1), v_phi/r = u1, om_phi/r = om1)
or into explicit powers of r with nonnegative exponent.

The dissipation D is assembled from face-centered first differences (the
discrete Dirichlet form of the gradient integrals): axial faces pair
exactly with the periodic second difference the stepper applies, radial
faces live at r_{i+1/2} with weight 2 pi r_{i+1/2} dr dz, and the wall
face contributes the half-cell one-sided difference for the components
that vanish there (v_r, v_phi) and nothing for v_z, whose wall condition
is the stress-free om_phi(R) = 0.  This keeps the cumulative balance
E(T) - E(0) + nu int D dt closed to the discretization error of the
scheme itself rather than to a wall artifact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dc_fields
from typing import Sequence

import math

import numpy as np

from .grid import EVEN, ODD, Grid, ScalarField, d_dr, d_dz, integrate_volume, norm_l2
from .kinematics import State, reconstruct_velocity


@dataclass
class MonitorRow:
    t: float
    E: float
    D: float
    critA: float
    critB: float
    critA_int: float
    critB_int: float
    swirl_sup: float
    cfz_l2: float
    cfz_grad_int: float
    cfz_l4_int: float
    phi_l2: float
    gamma_l2: float
    om1_l2: float
    om1_grad_int: float
    u1_l4_int: float
    ualpha_s: float
    quartic_lhs: float
    quartic_rhs: float


COLUMNS = tuple(f.name for f in dc_fields(MonitorRow))


@dataclass
class CriteriaSeries:
    """Monitor rows of one run plus the metadata needed to recompute them."""

    meta: dict
    rows: list[MonitorRow] = field(default_factory=list)
    _prev: dict | None = field(default=None, repr=False)

    @classmethod
    def for_run(cls, cfg) -> "CriteriaSeries":
        return cls(
            meta={
                "R": cfg.grid.R,
                "Lz": cfg.grid.Lz,
                "nr": cfg.grid.nr,
                "nz": cfg.grid.nz,
                "nu": cfg.nu,
                "scenario": cfg.scenario.name,
                "s": cfg.s,
            }
        )

    @classmethod
    def bare(cls, nu: float, s: int = 4) -> "CriteriaSeries":
        return cls(meta={"nu": nu, "s": s})


def _face_grad_sq(vals: np.ndarray, grid: Grid, wall_zero: bool) -> float:
    """int |grad f|^2 dx from face differences; see the module docstring."""
    w_node = grid.quad_w[:, None]
    dfz = (np.roll(vals, -1, axis=1) - vals) / grid.dz
    total = np.sum(w_node * dfz * dfz)
    dfr = (vals[1:] - vals[:-1]) / grid.dr
    r_face = grid.r[:-1] + 0.5 * grid.dr
    w_face = (2.0 * np.pi * r_face * grid.dr * grid.dz)[:, None]
    total += np.sum(w_face * dfr * dfr)
    if wall_zero:
        half = 0.5 * grid.dr
        w_wall = 2.0 * np.pi * grid.spec.R * half * grid.dz
        dwall = vals[-1] / half
        total += w_wall * np.sum(dwall * dwall)
    return float(total)


def energy_budget(state: State) -> tuple[float, float]:
    """Return (E, D) for one state."""
    g = state.grid
    vel = reconstruct_velocity(state)
    w = g.quad_w[:, None]
    vr, vphi, vz = vel.v_r.values, vel.v_phi.values, vel.v_z.values
    E = 0.5 * float(np.sum(w * (vr * vr + vphi * vphi + vz * vz)))
    vr_over_r = -d_dz(state.psi1).values
    vphi_over_r = state.u1.values
    D = (
        _face_grad_sq(vr, g, wall_zero=True)
        + _face_grad_sq(vphi, g, wall_zero=True)
        + _face_grad_sq(vz, g, wall_zero=False)
        + float(np.sum(w * (vr_over_r * vr_over_r + vphi_over_r * vphi_over_r)))
    )
    return E, D


def criterion_A(state: State) -> float:
    """int v_r^2 / r^3 dx via the reduced form 2 pi int (d_dz psi1)^2 dr dz."""
    g = state.grid
    dpz = d_dz(state.psi1).values
    return float(2.0 * np.pi * g.dr * g.dz * np.sum(dpz * dpz))


def criterion_B(state: State) -> float:
    """int om_phi^2 / r dx via 2 pi int r^2 om1^2 dr dz."""
    g = state.grid
    om = state.omega1.values
    return float(2.0 * np.pi * g.dr * g.dz * np.sum((g.r[:, None] ** 2) * om * om))


def swirl_sup(state: State) -> float:
    """max |r^2 u1| = max |r v_phi|."""
    g = state.grid
    return float(np.max(np.abs((g.r[:, None] ** 2) * state.u1.values)))


def quartic_check(state: State) -> tuple[float, float]:
    """Pointwise bound int v_phi^4 dx <= (max |r^2 u1|)^2 int u1^2 dx.

    Both sides are assembled elementwise with the same weights and summed
    by the same reduction, so the inequality survives rounding exactly.
    """
    g = state.grid
    w = g.quad_w[:, None]
    u = state.u1.values
    a = (g.r[:, None] ** 2) * u
    usq = u * u
    lhs = float(np.sum(w * ((a * a) * usq)))
    m = float(np.max(np.abs(a)))
    rhs = float(np.sum(w * ((m * m) * usq)))
    return lhs, rhs


def phi_gamma_norms(state: State) -> tuple[float, float]:
    """L2 volume norms of Phi = -d_dz(u1) ( = om_r / r) and Gamma = om1."""
    phi = norm_l2(d_dz(state.u1))
    gamma = norm_l2(state.omega1)
    return phi, gamma


def cfz_quantities(state: State) -> tuple[float, float, float]:
    """Quantities built on w = v_phi^2 / r = r u1^2 (odd parity):

    returns (int w^2 dx, int |grad w|^2 dx, int u1^4 dx).
    """
    g = state.grid
    u = state.u1.values
    wfield = ScalarField(g, g.r[:, None] * u * u, ODD)
    wsq = integrate_volume(ScalarField(g, wfield.values**2, EVEN))
    gw_r = d_dr(wfield).values
    gw_z = d_dz(wfield).values
    grad = integrate_volume(ScalarField(g, gw_r * gw_r + gw_z * gw_z, EVEN))
    l4 = integrate_volume(ScalarField(g, u**4, EVEN))
    return wsq, grad, l4


def omega1_energy(state: State) -> tuple[float, float]:
    """(||om1||_L2, int |grad om1|^2 dx)."""
    g_r = d_dr(state.omega1).values
    g_z = d_dz(state.omega1).values
    grad = integrate_volume(
        ScalarField(state.grid, g_r * g_r + g_z * g_z, EVEN)
    )
    return norm_l2(state.omega1), grad


def weighted_swirl_report(state: State, s: int = 4) -> tuple[float, float, float]:
    """Monitors of u_alpha = r^(2 - alpha) u1 with alpha = 3/s:

    returns (int |u_alpha|^s dx,
             int |grad |u_alpha|^(s/2)|^2 dx,
             int |u_alpha|^s / r^2 dx).

    The last exponent is 2s - 5 >= 1 for s >= 3, so no negative powers of
    r are evaluated.  |u_alpha|^(s/2) vanishes like r^(3/2) at the axis
    and is differentiated with odd parity.
    """
    if s < 3:
        raise ValueError(f"s must be an integer >= 3, got {s}")
    g = state.grid
    alpha = 3.0 / s
    r = g.r[:, None]
    absu = np.abs(state.u1.values)
    ua_s = integrate_volume(ScalarField(g, r ** (2.0 * s - 3.0) * absu**s, EVEN))
    half_pow = ScalarField(g, r ** (s - 1.5) * absu ** (s / 2.0), ODD)
    hr = d_dr(half_pow).values
    hz = d_dz(half_pow).values
    grad = integrate_volume(ScalarField(g, hr * hr + hz * hz, EVEN))
    weighted = integrate_volume(ScalarField(g, r ** (2.0 * s - 5.0) * absu**s, EVEN))
    return ua_s, grad, weighted


def lpq_norm(samples: Sequence[tuple[float, ScalarField]], p: float, q: float) -> float:
    """Space-time norm (int_0^T (int |u|^p dx)^(q/p) dt)^(1/q).

    Either exponent may be math.inf, meaning the essential sup in that
    variable.  The time integral is the trapezoid rule over the sample
    times, which must be strictly increasing.
    """
    if len(samples) == 0:
        raise ValueError("lpq_norm: empty sample series")
    if not (p >= 1.0 and q >= 1.0):
        raise ValueError(f"lpq_norm: exponents must be >= 1, got p={p}, q={q}")
    times = np.array([t for t, _ in samples], dtype=np.float64)
    if np.any(np.diff(times) <= 0):
        raise ValueError("lpq_norm: sample times must be strictly increasing")
    if not math.isinf(q) and len(samples) < 2:
        raise ValueError("lpq_norm: need at least 2 time samples for finite q")
    space = np.empty(len(samples))
    for n, (_, f) in enumerate(samples):
        if math.isinf(p):
            space[n] = np.max(np.abs(f.values))
        else:
            space[n] = integrate_volume(
                ScalarField(f.grid, np.abs(f.values) ** p, EVEN)
            ) ** (1.0 / p)
    if math.isinf(q):
        return float(np.max(space))
    vals = space**q
    integral = float(np.sum(0.5 * np.diff(times) * (vals[1:] + vals[:-1])))
    return integral ** (1.0 / q)


def omega1_budget(series: CriteriaSeries, nu: float) -> tuple[np.ndarray, np.ndarray]:
    """Vorticity energy budget along the rows:

    lhs(t) = (1/2)||om1(t)||^2 + (nu/2) int_0^t ||grad om1||^2
    rhs(t) = (2/nu) int_0^t ||u1||_L4^4 + (1/2)||om1(0)||^2

    The inequality lhs <= rhs holds for the continuum system with slack;
    callers check it row by row with a small tolerance.
    """
    if not series.rows:
        raise ValueError("omega1_budget: empty series")
    om0 = series.rows[0].om1_l2
    lhs = np.array(
        [0.5 * row.om1_l2**2 + 0.5 * nu * row.om1_grad_int for row in series.rows]
    )
    rhs = np.array(
        [2.0 / nu * row.u1_l4_int + 0.5 * om0**2 for row in series.rows]
    )
    return lhs, rhs


def _instantaneous(state: State, s: int) -> dict:
    E, D = energy_budget(state)
    critA = criterion_A(state)
    critB = criterion_B(state)
    sup = swirl_sup(state)
    cfz_l2, cfz_grad, cfz_l4 = cfz_quantities(state)
    phi, gamma = phi_gamma_norms(state)
    om_l2, om_grad = omega1_energy(state)
    ua_s, _, _ = weighted_swirl_report(state, s)
    qlhs, qrhs = quartic_check(state)
    return {
        "E": E,
        "D": D,
        "critA": critA,
        "critB": critB,
        "swirl_sup": sup,
        "cfz_l2": cfz_l2,
        "cfz_grad": cfz_grad,
        "cfz_l4": cfz_l4,
        "phi_l2": phi,
        "gamma_l2": gamma,
        "om1_l2": om_l2,
        "om1_grad": om_grad,
        "u1_l4": cfz_l4,
        "ualpha_s": ua_s,
        "quartic_lhs": qlhs,
        "quartic_rhs": qrhs,
    }


def sample(state: State, series: CriteriaSeries, nu: float) -> MonitorRow:
    """Append one monitor row; running integrals advance by the trapezoid
    rule against the previous row's instantaneous values."""
    meta_nu = series.meta.get("nu")
    if meta_nu is not None and not math.isclose(meta_nu, nu, rel_tol=1e-12):
        raise ValueError(f"sample: nu {nu} does not match series metadata {meta_nu}")
    s = int(series.meta.get("s", 4))
    inst = _instantaneous(state, s)
    t = state.t
    if series.rows:
        last = series.rows[-1]
        prev = series._prev
        if t <= last.t:
            raise ValueError(f"sample: time {t} not after previous row {last.t}")
        half = 0.5 * (t - last.t)

        def integ(acc: float, key: str) -> float:
            return acc + half * (prev[key] + inst[key])

        critA_int = integ(last.critA_int, "critA")
        critB_int = integ(last.critB_int, "critB")
        cfz_grad_int = integ(last.cfz_grad_int, "cfz_grad")
        cfz_l4_int = integ(last.cfz_l4_int, "cfz_l4")
        om1_grad_int = integ(last.om1_grad_int, "om1_grad")
        u1_l4_int = integ(last.u1_l4_int, "u1_l4")
    else:
        critA_int = critB_int = cfz_grad_int = cfz_l4_int = 0.0
        om1_grad_int = u1_l4_int = 0.0
    row = MonitorRow(
        t=t,
        E=inst["E"],
        D=inst["D"],
        critA=inst["critA"],
        critB=inst["critB"],
        critA_int=critA_int,
        critB_int=critB_int,
        swirl_sup=inst["swirl_sup"],
        cfz_l2=inst["cfz_l2"],
        cfz_grad_int=cfz_grad_int,
        cfz_l4_int=cfz_l4_int,
        phi_l2=inst["phi_l2"],
        gamma_l2=inst["gamma_l2"],
        om1_l2=inst["om1_l2"],
        om1_grad_int=om1_grad_int,
        u1_l4_int=u1_l4_int,
        ualpha_s=inst["ualpha_s"],
        quartic_lhs=inst["quartic_lhs"],
        quartic_rhs=inst["quartic_rhs"],
    )
    series.rows.append(row)
    series._prev = inst
    return row
