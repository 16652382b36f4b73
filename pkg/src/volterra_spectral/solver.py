"""Series solutions by the method of undetermined coefficients.

Substituting ``x = sum c_m t**m`` into ``lam x = A x + f`` and collecting
``t**m`` gives, for polynomial data,

    (lam - a(0) alpha**m) c_m = f_m + sum_{j>=1} a_j alpha**(m-j) c_{m-j}
                                    + sum_{p,q} kappa_pq c_i / (m - p),   i = m-p-q-1,

so each coefficient depends only on lower ones.  At a resonant order
``lam = a(0) alpha**N`` the left side vanishes: the homogeneous problem
gains the free coefficient ``c_N`` and a forced problem needs a
``ln t`` term (constant ``a`` only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operator import ProblemError, ProblemSpec
from .series import LogPowerSeries, PowerSeries, lps_eval
from .spectrum import eigenvalue


class ResonanceError(ProblemError):
    pass


@dataclass(frozen=True)
class ResonanceInfo:
    resonant: bool
    index: int | None
    lam: float


@dataclass(frozen=True)
class SeriesSolution:
    """``c * homogeneous + particular``."""

    particular: LogPowerSeries
    homogeneous: PowerSeries
    c: float = 0.0
    resonant_order: int | None = None

    @property
    def has_log(self) -> bool:
        return not self.particular.Q.is_zero()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.has_log:
            part = lps_eval(self.particular, t)
        else:
            part = self.particular.P(t)
        if self.c == 0.0:
            return part
        return part + self.c * self.homogeneous(t)

    def to_dict(self) -> dict:
        return {
            "P": list(self.particular.P.coeffs),
            "Q": list(self.particular.Q.coeffs),
            "homogeneous": list(self.homogeneous.coeffs),
            "c": self.c,
            "resonant_order": self.resonant_order,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SeriesSolution":
        try:
            P = PowerSeries(data["P"])
            Q = PowerSeries(data.get("Q") or [0.0] * len(P.coeffs))
            hom = PowerSeries(data.get("homogeneous") or [0.0])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemError(f"malformed solution document: {exc}") from exc
        n = max(P.order, Q.order)
        return cls(
            LogPowerSeries(P.with_order(n), Q.with_order(n)),
            hom,
            float(data.get("c", 0.0)),
            data.get("resonant_order"),
        )


def _kernel_sum(spec: ProblemSpec, c: list[float], m: int, squared: bool = False) -> float:
    """``sum kappa_pq c_i / (m-p)`` (or ``/(m-p)**2``) over ``p+q+i+1 = m``."""
    total = 0.0
    for p, q, k in spec.kernel.terms():
        i = m - p - q - 1
        if 0 <= i < len(c):
            d = m - p
            total += k * c[i] / (d * d if squared else d)
    return total


def _lower_order(spec: ProblemSpec, c: list[float], m: int) -> float:
    """Contributions to order ``m`` from ``c_0 .. c_{m-1}``."""
    total = _kernel_sum(spec, c, m)
    alpha = spec.alpha
    for j in range(1, min(m, spec.a.order) + 1):
        aj = spec.a[j]
        if aj:
            total += aj * alpha ** (m - j) * c[m - j]
    return total


def detect_resonance(spec: ProblemSpec, lam: float, max_order: int | None = None) -> ResonanceInfo:
    spec.require_a0()
    max_order = spec.options.order if max_order is None else max_order
    rtol = spec.options.resonance_rtol
    mu = spec.a0
    for m in range(max_order + 1):
        if abs(lam - mu) <= rtol * abs(lam):
            return ResonanceInfo(True, m, lam)
        mu *= spec.alpha
    return ResonanceInfo(False, None, lam)


def _divisor(spec: ProblemSpec, lam: float, m: int) -> float:
    return lam - spec.a0 * spec.alpha**m


def _near_zero(spec: ProblemSpec, d: float, lam: float) -> bool:
    return abs(d) <= spec.options.resonance_rtol * max(abs(lam), abs(spec.a0))


def homogeneous_series(spec: ProblemSpec, N: int, order: int | None = None) -> PowerSeries:
    """Eigenfunction for ``lam_N = a(0) alpha**N`` normalised to ``c_N = 1``."""
    order = spec.options.order if order is None else order
    if N > order:
        raise ProblemError(f"resonant order {N} exceeds truncation order {order}")
    lam = eigenvalue(spec, N)
    c: list[float] = []
    for m in range(order + 1):
        rhs = _lower_order(spec, c, m)
        d = _divisor(spec, lam, m)
        if m == N:
            if abs(rhs) > 1e-12 * max(1.0, max((abs(x) for x in c), default=0.0)):
                raise ResonanceError("resonant solvability violated")
            c.append(1.0)
        else:
            if _near_zero(spec, d, lam):
                raise ResonanceError(f"unexpected secondary resonance at order {m}")
            c.append(rhs / d)
    return PowerSeries(c)


def particular_nonresonant(spec: ProblemSpec, lam: float, order: int | None = None) -> PowerSeries:
    order = spec.options.order if order is None else order
    c: list[float] = []
    for m in range(order + 1):
        d = _divisor(spec, lam, m)
        if _near_zero(spec, d, lam):
            raise ResonanceError(
                f"lambda = {lam!r} is resonant at order {m}; use the resonant (log) solver"
            )
        c.append((spec.f[m] + _lower_order(spec, c, m)) / d)
    return PowerSeries(c)


def particular_resonant_log(spec: ProblemSpec, N: int, order: int | None = None) -> LogPowerSeries:
    """Particular solution ``P + ln(t) Q`` at ``lam = a(0) alpha**N``.

    Log terms: ``(lam - a0 alpha**m) Q_m = sum kappa Q_i/(m-p)``, so ``Q``
    vanishes below ``N`` and is a multiple of the eigenfunction above.
    Log-free terms: ``(lam - a0 alpha**m) P_m = f_m + a0 ln(alpha) alpha**m Q_m
    + sum kappa (P_i/(m-p) - Q_i/(m-p)**2)``.  At ``m = N`` the left side is
    zero, which fixes ``Q_N``; ``P_N`` is free and set to 0.
    """
    order = spec.options.order if order is None else order
    if not spec.a_is_constant():
        raise ResonanceError("resonant log solver requires constant a")
    a0 = spec.require_a0()
    if not 0 <= N <= order:
        raise ResonanceError(f"resonant order {N} outside 0..{order}")
    lam = eigenvalue(spec, N)
    log_alpha = math.log(spec.alpha)
    P: list[float] = []
    Q: list[float] = []
    for m in range(order + 1):
        d = _divisor(spec, lam, m)
        mu = a0 * spec.alpha**m
        q_rhs = _kernel_sum(spec, Q, m)
        p_rhs = spec.f[m] + _kernel_sum(spec, P, m) - _kernel_sum(spec, Q, m, squared=True)
        if m == N:
            Q.append(-p_rhs / (mu * log_alpha))
            P.append(0.0)
            continue
        if _near_zero(spec, d, lam):
            raise ResonanceError(f"unexpected secondary resonance at order {m}")
        Q.append(q_rhs / d)
        P.append((p_rhs + mu * log_alpha * Q[m]) / d)
    return LogPowerSeries(PowerSeries(P), PowerSeries(Q))


def _particular_resonant_plain(spec: ProblemSpec, N: int, order: int) -> PowerSeries | None:
    """Log-free particular solution at a resonance, if the order-N equation is consistent."""
    lam = eigenvalue(spec, N)
    c: list[float] = []
    for m in range(order + 1):
        rhs = spec.f[m] + _lower_order(spec, c, m)
        if m == N:
            scale = max([1.0, abs(spec.f[m])] + [abs(x) for x in c])
            if abs(rhs) > 1e-12 * scale:
                return None
            c.append(0.0)
            continue
        c.append(rhs / _divisor(spec, lam, m))
    return PowerSeries(c)


def general_solution(spec: ProblemSpec, lam: float, c: float = 0.0, order: int | None = None) -> SeriesSolution:
    """``c * phi + x_hat``; ``phi`` is zero away from resonance."""
    order = spec.options.order if order is None else order
    info = detect_resonance(spec, lam, order)
    if not info.resonant:
        x = particular_nonresonant(spec, lam, order)
        return SeriesSolution(LogPowerSeries.from_series(x), PowerSeries.zeros(order), c, None)
    N = info.index
    phi = homogeneous_series(spec, N, order)
    if spec.a_is_constant():
        xp = particular_resonant_log(spec, N, order)
    else:
        plain = _particular_resonant_plain(spec, N, order)
        if plain is None:
            raise ResonanceError("resonant log solver requires constant a")
        xp = LogPowerSeries.from_series(plain)
    return SeriesSolution(xp, phi, c, N)
