"""Initial states and the manufactured solution used for order checks.

Scenarios:

    zero          all fields zero
    pure_swirl    u1 = A cos(2 pi k z / Lz) exp(-((r - r_c)/w)^2), om1 = 0
    gaussian_ring om1 = u1 = A exp(-((r - r_c)^2 + (z - z_c)^2)/w^2)
    manufactured  closed-form (u1*, om1*, psi1*) below, plus the forcing
                  that makes them an exact solution

Every scenario finishes by slaving psi1 to om1 through the stream solve,
so initial states satisfy the same discrete constraint the stepper
maintains.

The manufactured fields are even polynomials in r times one Fourier mode
in z with an exponential decay in time:

    psi1* = 0.4 A (1 - (r/R)^2)^4 cos(2 pi k z / Lz) exp(-t)
    u1*   =     A (1 - (r/R)^2)^2 cos(2 pi k z / Lz + 0.7) exp(-t)
    om1*  = -lap3(psi1*)

Both evolved fields vanish quadratically at the wall, matching the
Dirichlet treatment there, and the even powers of r make the axis ghost
exact.  om1* is derived symbolically so the elliptic constraint holds in
closed form, and the two forcing terms are the symbolic residuals of the
evolution equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import solve_stream
from .grid import EVEN, Grid, GridSpec, ScalarField, zeros_field
from .kinematics import State

SCENARIO_NAMES = ("zero", "pure_swirl", "gaussian_ring", "manufactured")


@dataclass(frozen=True)
class Scenario:
    """Initial-condition family and its shape parameters."""

    name: str
    amplitude: float = 1.0
    width: float = 0.25
    r_center: float = 0.5
    z_center: float = 0.5
    mode_k: int = 1

    def validate(self, spec: GridSpec) -> None:
        if self.name not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario {self.name!r}")
        if not (np.isfinite(self.amplitude)):
            raise ValueError("scenario amplitude must be finite")
        if not (self.width > 0 and np.isfinite(self.width)):
            raise ValueError("scenario width must be positive")
        if not (0.0 <= self.r_center <= spec.R):
            raise ValueError(f"r_center {self.r_center} outside [0, R]")
        if not (0.0 <= self.z_center <= spec.Lz):
            raise ValueError(f"z_center {self.z_center} outside [0, Lz]")
        if self.mode_k < 1:
            raise ValueError(f"mode_k must be at least 1, got {self.mode_k}")


def init_scenario(scenario: Scenario, grid: Grid) -> State:
    scenario.validate(grid.spec)
    name = scenario.name
    A = scenario.amplitude
    w = scenario.width
    rc, zc, k = scenario.r_center, scenario.z_center, scenario.mode_k
    Lz = grid.spec.Lz
    r = grid.r[:, None]
    z = grid.z[None, :]
    if name == "zero":
        u1 = zeros_field(grid, EVEN)
        om1 = zeros_field(grid, EVEN)
    elif name == "pure_swirl":
        vals = A * np.cos(2.0 * np.pi * k * z / Lz) * np.exp(-(((r - rc) / w) ** 2))
        u1 = ScalarField(grid, np.broadcast_to(vals, (grid.nr, grid.nz)).copy(), EVEN)
        om1 = zeros_field(grid, EVEN)
    elif name == "gaussian_ring":
        vals = A * np.exp(-(((r - rc) ** 2) + ((z - zc) ** 2)) / (w * w))
        u1 = ScalarField(grid, vals.copy(), EVEN)
        om1 = ScalarField(grid, vals.copy(), EVEN)
    elif name == "manufactured":
        man = manufactured_solution(grid.spec, nu=1.0, scenario=scenario)
        u1 = ScalarField(grid, man.u1(grid, 0.0), EVEN)
        om1 = ScalarField(grid, man.om1(grid, 0.0), EVEN)
    else:  # pragma: no cover - validate() already rejected
        raise ValueError(f"unknown scenario {name!r}")
    psi1 = solve_stream(om1)
    return State(u1=u1, omega1=om1, psi1=psi1, t=0.0)


class ManufacturedSolution:
    """Closed-form fields and forcing, evaluated on demand."""

    def __init__(self, fns: dict):
        self._fns = fns

    def _eval(self, key: str, grid: Grid, t: float) -> np.ndarray:
        out = self._fns[key](grid.r[:, None], grid.z[None, :], t)
        return np.broadcast_to(out, (grid.nr, grid.nz)).astype(np.float64).copy()

    def u1(self, grid: Grid, t: float) -> np.ndarray:
        return self._eval("u1", grid, t)

    def om1(self, grid: Grid, t: float) -> np.ndarray:
        return self._eval("om1", grid, t)

    def psi1(self, grid: Grid, t: float) -> np.ndarray:
        return self._eval("psi1", grid, t)

    def f_u(self, grid: Grid, t: float) -> np.ndarray:
        return self._eval("f_u", grid, t)

    def f_om(self, grid: Grid, t: float) -> np.ndarray:
        return self._eval("f_om", grid, t)


def manufactured_solution(
    spec: GridSpec, nu: float, scenario: Scenario | None = None
) -> ManufacturedSolution:
    """Build the closed forms symbolically and lambdify them.

    The forcing terms are the residuals of the two evolution equations on
    the prescribed fields, with velocities reconstructed from psi1*, so a
    run forced this way has (u1*, om1*) as exact solution.
    """
    import sympy as sp

    if scenario is None:
        scenario = Scenario(name="manufactured")
    A = float(scenario.amplitude)
    k = int(scenario.mode_k)
    R, Lz = float(spec.R), float(spec.Lz)

    r, z, t = sp.symbols("r z t", positive=True)
    kz = 2 * sp.pi * k * z / Lz
    decay = sp.exp(-t)
    psi = sp.Rational(2, 5) * A * (1 - (r / R) ** 2) ** 4 * sp.cos(kz) * decay
    u1 = A * (1 - (r / R) ** 2) ** 2 * sp.cos(kz + sp.Rational(7, 10)) * decay

    def lap3(f):
        return sp.diff(f, r, 2) + 3 / r * sp.diff(f, r) + sp.diff(f, z, 2)

    om1 = sp.expand(-lap3(psi))
    vr = -r * sp.diff(psi, z)
    vz = 2 * psi + r * sp.diff(psi, r)

    def advect(f):
        return vr * sp.diff(f, r) + vz * sp.diff(f, z)

    f_u = sp.diff(u1, t) + advect(u1) - nu * lap3(u1) - 2 * u1 * sp.diff(psi, z)
    f_om = sp.diff(om1, t) + advect(om1) - nu * lap3(om1) - 2 * u1 * sp.diff(u1, z)

    fns = {}
    for key, expr in (
        ("psi1", psi),
        ("u1", u1),
        ("om1", om1),
        ("f_u", sp.expand(f_u)),
        ("f_om", sp.expand(f_om)),
    ):
        fns[key] = sp.lambdify((r, z, t), expr, modules="numpy")
    return ManufacturedSolution(fns)
