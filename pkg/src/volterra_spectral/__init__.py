"""Spectral analysis and solvers for Volterra operators with a contracted argument,

    (A x)(t) = int_0^t K(t,s) x(s) ds + a(t) x(alpha t),   0 < alpha < 1.
"""

from .grid import GridFunction
from .iteration import (
    ConvergenceError,
    IterationTrace,
    assemble_eigenfunction,
    fixed_point_solve,
    forcing_g,
    iterate_eigenfunction,
    weighted_norm,
)
from .operator import (
    BivariateKernel,
    ProblemError,
    ProblemSpec,
    ResidualReport,
    SolverOptions,
    apply_to_grid,
    apply_to_series,
    residual,
)
from .series import LogPowerSeries, PowerSeries, SeriesError
from .solver import (
    ResonanceError,
    ResonanceInfo,
    SeriesSolution,
    detect_resonance,
    general_solution,
    homogeneous_series,
    particular_nonresonant,
    particular_resonant_log,
)
from .spectrum import (
    ConditionReport,
    ContractionEstimate,
    SpectralReport,
    check_conditions,
    eigenvalue,
    estimate_contraction,
    spectrum,
)

__version__ = "0.1.0"
