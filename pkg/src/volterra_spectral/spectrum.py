"""Eigenvalues ``a(0) alpha**n`` and numerical checks of their hypotheses."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .operator import ProblemError, ProblemSpec

L_STAR_MARGIN = 0.1


@dataclass(frozen=True)
class ConditionReport:
    """Grid suprema for the Hoelder bound on ``a`` and the contraction of the
    functional term.

    ``l_hat`` is ``sup |a(t) - a(0)| / |t|**eps``; ``q_hat`` is
    ``sup |a(t)| alpha**eps / |a(0)|``.  Both are taken over ``[-T, T]``
    with the origin excluded.
    """

    epsilon: float
    l_hat: float
    q_hat: float
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ContractionEstimate:
    n: int
    L_star: float
    q_of_L: float
    K_max: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: tuple[tuple[int, float], ...]

    def values(self) -> list[float]:
        return [lam for _, lam in self.eigenvalues]

    def to_dict(self) -> dict:
        return {"eigenvalues": [{"n": n, "lambda": lam} for n, lam in self.eigenvalues]}


def eigenvalue(spec: ProblemSpec, n: int) -> float:
    # repeated multiplication keeps lam_{n+1} == alpha * lam_n bit-for-bit
    if n < 0:
        raise ValueError("eigenvalue index must be >= 0")
    lam = spec.require_a0()
    for _ in range(n):
        lam *= spec.alpha
    return lam


def spectrum(spec: ProblemSpec, count: int) -> SpectralReport:
    lam = spec.require_a0()
    pairs = []
    for n in range(count):
        pairs.append((n, lam))
        lam *= spec.alpha
    return SpectralReport(tuple(pairs))


def check_conditions(spec: ProblemSpec, epsilon: float | None = None) -> ConditionReport:
    eps = spec.options.epsilon if epsilon is None else epsilon
    if not 0.0 < eps < 1.0:
        raise ProblemError("epsilon must lie in (0,1)")
    a0 = spec.require_a0()
    # even sample count on [-T, T] skips t = 0 and keeps both endpoints
    m = spec.options.condition_samples
    t = np.linspace(-spec.T, spec.T, m + (m % 2))
    at = spec.a(t)
    l_hat = float(np.max(np.abs(at - a0) / np.abs(t) ** eps))
    q_hat = float(np.max(np.abs(at)) * spec.alpha**eps / abs(a0))
    return ConditionReport(eps, l_hat, q_hat, q_hat < 1.0)


def estimate_contraction(
    spec: ProblemSpec, n: int, epsilon: float | None = None, report: ConditionReport | None = None
) -> ContractionEstimate:
    """Weight ``L`` making the fixed-point map for ``v`` a contraction.

    In the norm ``max e^{-L|t|} |v(t)|`` the functional term is bounded by
    ``q_hat`` and the integral term by ``K_max / (|a(0)| alpha**n L)``.
    """
    if report is None:
        report = check_conditions(spec, epsilon)
    if not report.holds:
        raise ProblemError("conditions on a(t) not verified")
    lam = abs(eigenvalue(spec, n))
    k_max = spec.kernel.sup_on_triangle(spec.T, spec.options.symmetric)
    l_star = (1.0 + L_STAR_MARGIN) * k_max / (lam * (1.0 - report.q_hat))
    l_star = max(l_star, L_STAR_MARGIN)
    q_of_l = report.q_hat + k_max / (lam * l_star)
    return ContractionEstimate(n, l_star, q_of_l, k_max)
