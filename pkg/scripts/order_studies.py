#!/usr/bin/env python3
"""Reproduce every convergence and calibration study behind the test gates.

Prints observed orders for the elliptic solve, the incompressibility
residual, and the forced time integration, plus the measured weighted
criteria ratio over the random ensemble.  Expect a couple of minutes.
"""

import argparse

from axns.grid import GridSpec, make_grid
from axns.studies import (
    divergence_study,
    dynamics_spatial_study,
    dynamics_temporal_study,
    elliptic_study,
    observed_order,
    ratio_ensemble,
    swirl_decay_error,
)


def show(label, errors) -> None:
    orders = ", ".join(f"{p:.3f}" for p in observed_order(errors))
    errs = ", ".join(f"{e:.3e}" for e in errors)
    print(f"{label}: errors [{errs}] -> orders [{orders}]")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ensemble", type=int, default=100)
    args = ap.parse_args()

    errs, resids = elliptic_study(levels=(32, 64, 128))
    show("elliptic manufactured solution", errs)
    print(f"  solver residuals: max {max(resids):.3e}")

    show("divergence of reconstructed velocity", divergence_study())
    show("forced run, spatial refinement", dynamics_spatial_study())
    show("forced run, time-step refinement", dynamics_temporal_study())
    print(f"linear swirl decay: rel error {swirl_decay_error():.3e}")

    for n in (64, 128):
        g = make_grid(GridSpec(R=1.0, Lz=1.0, nr=n, nz=n))
        ratios = ratio_ensemble(args.ensemble, g, seed=11)
        print(
            f"criteria ratio ensemble ({args.ensemble} fields, {n}^2): "
            f"max {max(ratios):.4f}"
        )


if __name__ == "__main__":
    main()
