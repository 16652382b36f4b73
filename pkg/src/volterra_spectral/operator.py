"""Problem data and the integral-functional operator

    (A x)(t) = int_0^t K(t,s) x(s) ds + a(t) x(alpha t)

applied exactly to series and numerically to sampled functions, plus the
quadrature residual used to check every solver in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .grid import GridFunction, uniform_nodes
from .quadrature import GL_POINTS, graded_breaks, panel_points
from .series import (
    LogPowerSeries,
    PowerSeries,
    as_series,
    lps_combine,
    lps_dilate,
    lps_integrate_from_zero,
    lps_multiply,
    lps_shift,
)

MAX_KERNEL_DEGREE = 16


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class BivariateKernel:
    """``K(t, s) = sum_pq coeffs[p][q] t**p s**q``; rows index powers of t."""

    coeffs: tuple[tuple[float, ...], ...]

    def __init__(self, coeffs: Sequence[Sequence[float]] = (), max_degree: int = MAX_KERNEL_DEGREE):
        rows = [[float(c) for c in row] for row in coeffs]
        rows = rows or [[0.0]]
        width = max(len(r) for r in rows) or 1
        rows = [r + [0.0] * (width - len(r)) for r in rows]
        if not all(math.isfinite(c) for r in rows for c in r):
            raise ProblemError("kernel coefficients must be finite")
        if len(rows) - 1 > max_degree or width - 1 > max_degree:
            raise ProblemError(f"kernel degree exceeds the configured maximum {max_degree}")
        object.__setattr__(self, "coeffs", tuple(tuple(r) for r in rows))

    @classmethod
    def constant(cls, value: float) -> "BivariateKernel":
        return cls([[value]])

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def is_zero(self) -> bool:
        return not any(c for r in self.coeffs for c in r)

    def terms(self):
        """Nonzero ``(p, q, kappa)`` triples."""
        for p, row in enumerate(self.coeffs):
            for q, k in enumerate(row):
                if k != 0.0:
                    yield p, q, k

    @property
    def t_degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def s_degree(self) -> int:
        return len(self.coeffs[0]) - 1

    def __call__(self, t, s):
        t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
        out = np.zeros(t.shape)
        for p, q, k in self.terms():
            out = out + k * t**p * s**q
        return out

    def sup_on_triangle(self, T: float, symmetric: bool = False, samples: int = 257) -> float:
        """Grid maximum of ``|K|`` over ``s`` between 0 and ``t``, ``|t| <= T``."""
        if self.is_zero():
            return 0.0
        t = uniform_nodes(T, samples, symmetric)[:, None]
        u = np.linspace(0.0, 1.0, samples)[None, :]
        return float(np.max(np.abs(self(t, t * u))))


@dataclass(frozen=True)
class SolverOptions:
    order: int = 30
    grid: int = 512
    quad_points: int = GL_POINTS
    tol: float = 1e-12
    max_iter: int = 200
    epsilon: float = 0.5
    min_t: float = 0.01
    interpolation: str = "not-a-knot"
    symmetric: bool = False
    condition_samples: int = 2048
    resonance_rtol: float = 1e-9
    residual_samples: int = 401

    def __post_init__(self):
        if self.order < 0:
            raise ProblemError("truncation order must be >= 0")
        if self.grid < 4:
            raise ProblemError("grid size must be >= 4")
        if not 0.0 < self.epsilon < 1.0:
            raise ProblemError("epsilon must lie in (0,1)")
        if self.tol <= 0 or self.max_iter < 1:
            raise ProblemError("tolerance must be positive and max_iter >= 1")


@dataclass(frozen=True)
class ProblemSpec:
    """``lam x = int_0^t K x ds + a(t) x(alpha t) + f(t)`` on ``|t| <= T``."""

    alpha: float
    a: PowerSeries
    kernel: BivariateKernel = field(default_factory=BivariateKernel)
    f: PowerSeries = field(default_factory=lambda: PowerSeries([0.0]))
    T: float = 1.0
    lam: float | None = None
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ProblemError("alpha must lie in (0,1)")
        if not self.T > 0:
            raise ProblemError("T must be positive")
        object.__setattr__(self, "a", as_series(self.a))
        object.__setattr__(self, "f", as_series(self.f))
        if not isinstance(self.kernel, BivariateKernel):
            object.__setattr__(self, "kernel", BivariateKernel(self.kernel))

    @property
    def a0(self) -> float:
        return self.a[0]

    def require_a0(self) -> float:
        if self.a0 == 0.0:
            raise ProblemError("spectral operations require a(0) != 0")
        return self.a0

    def without_forcing(self) -> "ProblemSpec":
        return replace(self, f=PowerSeries([0.0]))

    def a_is_constant(self) -> bool:
        return not any(self.a.coeffs[1:])

    def nodes(self, size: int | None = None) -> np.ndarray:
        return uniform_nodes(self.T, size or self.options.grid, self.options.symmetric)


@dataclass(frozen=True)
class ResidualReport:
    sup_norm: float
    l2_norm: float
    t: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)
    domain: tuple[float, float] = (0.0, 1.0)

    def to_dict(self, with_samples: bool = False) -> dict:
        out = {"sup_norm": self.sup_norm, "l2_norm": self.l2_norm, "domain": list(self.domain)}
        if with_samples:
            out["t"] = self.t.tolist()
            out["residual"] = self.r.tolist()
        return out


def apply_to_series(spec: ProblemSpec, x: LogPowerSeries | PowerSeries) -> LogPowerSeries:
    """``A x`` in series algebra, truncated at ``x.order``.

    The largest discarded coefficient is kept in ``result.overflow``.
    """
    if isinstance(x, PowerSeries):
        x = LogPowerSeries.from_series(x)
    N = x.order
    top = N + spec.kernel.t_degree + spec.kernel.s_degree + spec.a.order + 1
    acc = LogPowerSeries(PowerSeries.zeros(top), PowerSeries.zeros(top))
    for p, q, k in spec.kernel.terms():
        term = lps_shift(lps_integrate_from_zero(lps_shift(x, q)), p).with_order(top)
        acc = lps_combine(1.0, acc, k, term)
    functional = lps_multiply(spec.a, lps_dilate(x, spec.alpha).with_order(top))
    acc = lps_combine(1.0, acc, 1.0, functional)
    dropped = acc.P.coeffs[N + 1 :] + acc.Q.coeffs[N + 1 :]
    overflow = max((abs(c) for c in dropped), default=0.0)
    return LogPowerSeries(acc.P.with_order(N), acc.Q.with_order(N), overflow=overflow)


def apply_to_grid(spec: ProblemSpec, x: GridFunction) -> GridFunction:
    """``A x`` at the nodes of ``x``.

    The integral uses one Gauss-Legendre panel per node interval over the
    cubic interpolant of ``x``; ``x(alpha t)`` is interpolated.
    """
    if x.weighted:
        raise ValueError("apply_to_grid expects an unweighted grid function")
    t = x.nodes
    integral = np.zeros_like(t)
    if not spec.kernel.is_zero():
        moments = x.cumulative_moments(spec.kernel.s_degree, spec.options.quad_points)
        for p, q, k in spec.kernel.terms():
            integral += k * t**p * moments[q]
    return x.with_values(integral + spec.a(t) * x(spec.alpha * t))


def volterra_integral(kernel: BivariateKernel, x: Callable, t, levels: int = 48, n: int = GL_POINTS):
    """``int_0^t K(t,s) x(s) ds`` for each ``t`` by graded composite quadrature.

    Only pointwise values of ``x`` are used, so this is independent of how
    ``x`` was built.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if kernel.is_zero():
        return np.zeros_like(t)
    s, w = panel_points(graded_breaks(t, levels), n)
    tt = t[:, None, None]
    vals = np.asarray(x(s.ravel()), dtype=float).reshape(s.shape)
    return np.sum(w * kernel(tt, s) * vals, axis=(1, 2))


def residual(
    spec: ProblemSpec,
    lam: float,
    x: Callable,
    domain: tuple[float, float] | None = None,
    samples: int | None = None,
) -> ResidualReport:
    """Sample ``lam x(t) - (A x)(t) - f(t)`` over ``domain``.

    ``x`` is anything callable on arrays: a series, a log series (then the
    domain must be positive), a grid function or a solution object.
    """
    lo, hi = domain if domain is not None else (-spec.T if spec.options.symmetric else 0.0, spec.T)
    if not hi > lo:
        raise ProblemError(f"empty residual domain [{lo}, {hi}]")
    t = np.linspace(lo, hi, samples or spec.options.residual_samples)
    x_t = np.asarray(x(t), dtype=float)
    ax = volterra_integral(spec.kernel, x, t, n=spec.options.quad_points)
    ax = ax + spec.a(t) * np.asarray(x(spec.alpha * t), dtype=float)
    r = lam * x_t - ax - spec.f(t)
    l2 = math.sqrt(float(trapezoid(r * r, t)))
    return ResidualReport(float(np.max(np.abs(r))), l2, t, r, (float(lo), float(hi)))
