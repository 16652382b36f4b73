"""Eigenfunctions by successive approximation.

For ``lam_n = a(0) alpha**n`` the eigenfunction is sought as
``phi(t) = t**n + t**(n+eps) v(t)`` and ``v`` is the fixed point of

    v = g + (a(t)/a(0)) alpha**eps v(alpha t)
          + 1/(a(0) alpha**n) int_0^t K(t,s) (s/t)**(n+eps) v(s) ds

iterated from ``v = 0`` in the norm ``max e^{-L|t|} |v(t)|``.  Powers of
negative ``t`` follow ``t**(n+eps) := t**n |t|**eps``.

``v`` generally behaves like ``|t|**(1-eps)`` near the origin, so it is
interpolated through ``|t|**eps v = phi/t**n - 1``, which is smooth for
polynomial data and pinned to 0 at the origin.  (Interpolating
``t**(n+eps) v`` instead admits a spurious ``t**n`` mode on the first grid
interval that the map leaves invariant for ``n >= 1``.)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, signed_power
from .operator import ProblemError, ProblemSpec
from .spectrum import (
    ConditionReport,
    ContractionEstimate,
    check_conditions,
    eigenvalue,
    estimate_contraction,
)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, trace: "IterationTrace"):
        super().__init__(message)
        self.trace = trace


@dataclass
class IterationTrace:
    differences: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def ratios(self) -> np.ndarray:
        d = np.asarray(self.differences)
        if d.size < 2:
            return np.zeros(0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(d[:-1] > 0, d[1:] / d[:-1], 0.0)

    @property
    def ratio(self) -> float:
        """Largest observed ratio of successive weighted differences."""
        r = self.ratios
        return float(r.max()) if r.size else 0.0

    def to_dict(self) -> dict:
        return {
            "differences": list(self.differences),
            "iterations": self.iterations,
            "converged": self.converged,
            "ratio": self.ratio,
        }


def weighted_norm(x: GridFunction, L: float) -> float:
    if L <= 0:
        raise ValueError("weight L must be positive")
    return float(np.max(np.exp(-np.abs(x.nodes) * L) * np.abs(x.values)))


def _check_domain(t: np.ndarray) -> None:
    if np.count_nonzero(t == 0.0) != 1:
        raise ValueError("grid must contain t = 0 exactly once")


def forcing_g(spec: ProblemSpec, n: int, eps: float, nodes) -> GridFunction:
    """Inhomogeneous part of the fixed-point map, with ``g(0) = 0``.

    ``g = (a(t)-a(0)) / (a(0) t**eps) + int_0^t K(t,s) s**n ds / (a(0) alpha**n t**(n+eps))``;
    the integral is exact for polynomial kernels.
    """
    a0 = spec.require_a0()
    lam = eigenvalue(spec, n)
    t = np.asarray(nodes, dtype=float)
    # int_0^t t^p s^(q+n) ds / t^n = t^(p+q+1) / (q+n+1)
    numer = (spec.a(t) - a0) / a0
    for p, q, k in spec.kernel.terms():
        numer = numer + k * t ** (p + q + 1) / ((q + n + 1) * lam)
    g = np.zeros_like(t)
    nz = t != 0.0
    g[nz] = numer[nz] / np.abs(t[nz]) ** eps
    return GridFunction(t, g, spec.options.interpolation, (0, eps))


def fixed_point_solve(
    spec: ProblemSpec,
    n: int,
    eps: float,
    L: float,
    tol: float | None = None,
    max_iter: int | None = None,
    nodes=None,
) -> tuple[GridFunction, IterationTrace]:
    """Successive approximations for ``v`` on ``nodes`` (default: the problem grid).

    Stops once the weighted difference of consecutive iterates is at most
    ``tol``; raises :class:`ConvergenceError` carrying the trace otherwise.
    """
    tol = spec.options.tol if tol is None else tol
    max_iter = spec.options.max_iter if max_iter is None else max_iter
    if L <= 0:
        raise ValueError("weight L must be positive")
    a0 = spec.require_a0()
    lam = eigenvalue(spec, n)
    t = spec.nodes() if nodes is None else np.asarray(nodes, dtype=float)
    _check_domain(t)

    g = forcing_g(spec, n, eps, t).values
    shrink = spec.a(t) / a0 * spec.alpha**eps
    at = spec.alpha * t
    w = signed_power(t, n, eps)
    nz = w != 0.0
    # int_0^t K(t,s) (s/t)^(n+eps) v(s) ds = t^-(n+eps) sum kappa t^p int s^(q+n) |s|^eps v(s) ds
    decay = np.exp(-np.abs(t) * L)
    terms = list(spec.kernel.terms())

    trace = IterationTrace()
    v = np.zeros_like(t)
    for _ in range(max_iter):
        current = GridFunction(t, v, spec.options.interpolation, (0, eps))
        nxt = g + shrink * current(at)
        if terms:
            moments = current.cumulative_moments(spec.kernel.s_degree + n, spec.options.quad_points)
            integral = np.zeros_like(t)
            for p, q, k in terms:
                integral += k * t**p * moments[q + n]
            nxt[nz] += integral[nz] / (lam * w[nz])
        diff = float(np.max(decay * np.abs(nxt - v)))
        v = nxt
        trace.differences.append(diff)
        trace.iterations += 1
        if diff <= tol:
            trace.converged = True
            break
    if not trace.converged:
        raise ConvergenceError(
            f"no convergence to {tol:g} within {max_iter} iterations (last difference {diff:.3e})",
            trace,
        )
    return GridFunction(t, v, spec.options.interpolation, (0, eps)), trace


def assemble_eigenfunction(n: int, eps: float, v: GridFunction) -> GridFunction:
    """``phi(t) = t**n + t**n |t|**eps v(t)`` at the nodes of ``v``."""
    t = v.nodes
    return GridFunction(t, t**n + signed_power(t, n, eps) * v.values, v.rule)


@dataclass
class IteratedEigenfunction:
    n: int
    eigenvalue: float
    phi: GridFunction
    v: GridFunction
    trace: IterationTrace
    conditions: ConditionReport
    contraction: ContractionEstimate


def iterate_eigenfunction(
    spec: ProblemSpec,
    n: int,
    eps: float | None = None,
    L: float | None = None,
    tol: float | None = None,
    max_iter: int | None = None,
    nodes=None,
) -> IteratedEigenfunction:
    """Check the hypotheses, pick ``L = L_star`` unless given, iterate, assemble."""
    eps = spec.options.epsilon if eps is None else eps
    report = check_conditions(spec, eps)
    if not report.holds:
        raise ProblemError(f"conditions on a(t) not verified (q_hat = {report.q_hat:.6g})")
    estimate = estimate_contraction(spec, n, eps, report)
    if L is None:
        L = estimate.L_star
    v, trace = fixed_point_solve(spec, n, eps, L, tol, max_iter, nodes)
    phi = assemble_eigenfunction(n, eps, v)
    return IteratedEigenfunction(n, eigenvalue(spec, n), phi, v, trace, report, estimate)
