"""Stream-function solve: -lap3(psi1) = om1.

Direct method: a real FFT along the periodic z direction diagonalizes the
axial second difference (eigenvalue -(2 - 2 cos(2 pi k / nz)) / dz^2), and
each mode leaves a real tridiagonal system in r built from the same
radial_bands coefficients that modified_laplacian applies.  The tridiagonal
factorizations depend only on the grid, so they are computed once per grid
and reused; each solve is then one rfft, a vectorized forward/backward
substitution over all modes, and one irfft.

The per-mode matrix  M_k = -(radial part) + mu_k I  has positive diagonal
and nonpositive off-diagonals, and the Dirichlet wall row makes it
irreducibly diagonally dominant, so it is an M-matrix: the solve is
unconditionally well posed, all pivots are positive, and nonnegative om1
yields nonnegative psi1.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .grid import (
    EVEN,
    Grid,
    ScalarField,
    d_dz,
    modified_laplacian,
    norm_l2,
    radial_bands,
)


@dataclass
class EllipticReport:
    """Outcome of one stream solve: discrete residual, mode count, and
    optionally the ratio of the two weighted criteria integrals."""

    residual_l2: float
    modes: int
    ratio_A_over_B: float | None = None


class _StreamFactor:
    """Per-grid factorization of the mode-wise tridiagonal systems."""

    def __init__(self, grid: Grid):
        nr, nz = grid.nr, grid.nz
        sub, diag, sup = radial_bands(grid)
        k = np.arange(nz // 2 + 1)
        mu = (2.0 - 2.0 * np.cos(2.0 * np.pi * k / nz)) / (grid.dz * grid.dz)
        # M_k = -(L_r) + mu_k I
        a = -sub
        c = -sup
        b = -diag[None, :] + mu[:, None]
        nm = mu.size
        d = np.empty((nm, nr))
        w = np.zeros((nm, nr))
        d[:, 0] = b[:, 0]
        for i in range(1, nr):
            w[:, i] = a[i] / d[:, i - 1]
            d[:, i] = b[:, i] - w[:, i] * c[i - 1]
        if not np.all(d > 0.0):
            raise RuntimeError("stream solver factorization lost positivity")
        self.nz = nz
        self.c = c
        self.d = d
        self.w = w

    def solve(self, rhs_values: np.ndarray) -> np.ndarray:
        g = np.fft.rfft(rhs_values, axis=1).T.copy()  # (modes, nr)
        nr = g.shape[1]
        for i in range(1, nr):
            g[:, i] -= self.w[:, i] * g[:, i - 1]
        g[:, -1] /= self.d[:, -1]
        for i in range(nr - 2, -1, -1):
            g[:, i] = (g[:, i] - self.c[i] * g[:, i + 1]) / self.d[:, i]
        return np.fft.irfft(g.T, n=self.nz, axis=1)


_factors: "weakref.WeakKeyDictionary[Grid, _StreamFactor]" = weakref.WeakKeyDictionary()


def _factor_for(grid: Grid) -> _StreamFactor:
    fac = _factors.get(grid)
    if fac is None:
        fac = _StreamFactor(grid)
        _factors[grid] = fac
    return fac


def solve_stream(omega1: ScalarField) -> ScalarField:
    """Solve -lap3(psi1) = om1 with even axis parity and psi1(R) = 0."""
    if omega1.parity != EVEN:
        raise ValueError("solve_stream expects an even-parity source")
    if not np.all(np.isfinite(omega1.values)):
        raise ValueError("solve_stream: source contains non-finite values")
    psi = _factor_for(omega1.grid).solve(omega1.values)
    return ScalarField(omega1.grid, psi, EVEN)


def stream_residual(psi1: ScalarField, omega1: ScalarField) -> float:
    """L2 volume norm of om1 + lap3(psi1)."""
    if psi1.grid is not omega1.grid:
        raise ValueError("stream_residual: fields live on different grids")
    res = omega1.values + modified_laplacian(psi1).values
    return norm_l2(ScalarField(psi1.grid, res, EVEN))


def criteria_ratio(omega1: ScalarField) -> tuple[float, float, float]:
    """Weighted criteria pair for one vorticity slice.

    A = int (v_r)^2 / r^3 dx = 2 pi int (d_dz psi1)^2 dr dz
    B = int (om_phi)^2 / r dx = 2 pi int r^2 om1^2 dr dz

    Returns (A, B, A/B); (0, 0, 0) for the zero slice.  B = 0 with A > 0
    cannot happen for a consistent solve and raises.
    """
    g = omega1.grid
    psi1 = solve_stream(omega1)
    line_w = 2.0 * np.pi * g.dr * g.dz
    dpz = d_dz(psi1).values
    A = float(line_w * np.sum(dpz * dpz))
    om = omega1.values
    B = float(line_w * np.sum((g.r[:, None] ** 2) * om * om))
    if B == 0.0:
        if A == 0.0:
            return 0.0, 0.0, 0.0
        raise RuntimeError("criteria_ratio: zero enstrophy weight with nonzero flow")
    return A, B, A / B


def stream_report(omega1: ScalarField, with_ratio: bool = False) -> EllipticReport:
    psi1 = solve_stream(omega1)
    res = stream_residual(psi1, omega1)
    ratio = None
    if with_ratio:
        _, _, ratio = criteria_ratio(omega1)
    return EllipticReport(
        residual_l2=res, modes=omega1.grid.nz // 2 + 1, ratio_A_over_B=ratio
    )
