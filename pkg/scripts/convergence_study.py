"""Truncation-order and grid-size convergence for the pantograph example.

    python scripts/convergence_study.py
"""

import dataclasses

import numpy as np

from volterra_spectral import (
    BivariateKernel,
    PowerSeries,
    ProblemSpec,
    general_solution,
    homogeneous_series,
    iterate_eigenfunction,
    residual,
)


def main():
    spec = ProblemSpec(0.5, PowerSeries([1.0]), BivariateKernel([[1.0]]), PowerSeries([2.0]))
    unforced = spec.without_forcing()

    print("order  eigenfunction residual [0,1/2]  log solution residual [0.01,1]")
    for order in (2, 4, 6, 8, 10, 14, 20, 30):
        r_hom = residual(unforced, 1.0, homogeneous_series(unforced, 0, order), (0, 0.5)).sup_norm
        r_log = residual(spec, 1.0, general_solution(spec, 1.0, 0.0, order), (0.01, 1.0)).sup_norm
        print(f"{order:5d}  {r_hom:30.3e}  {r_log:30.3e}")

    exact = homogeneous_series(unforced, 0, 30)
    print("\ngrid   iterations  max |phi_iterate - phi_series| on [0,1]")
    for grid in (32, 64, 128, 256, 512, 1024):
        s = dataclasses.replace(unforced, options=dataclasses.replace(unforced.options, grid=grid))
        run = iterate_eigenfunction(s, 0)
        err = np.max(np.abs(run.phi.values - exact(run.phi.nodes)))
        print(f"{grid:5d}  {run.trace.iterations:10d}  {err:.3e}")


if __name__ == "__main__":
    main()
