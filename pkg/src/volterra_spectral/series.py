"""Truncated power series and log-augmented power series.

A :class:`PowerSeries` is the polynomial ``c_0 + c_1 t + ... + c_N t^N``
with its truncation order ``N`` carried explicitly.  A
:class:`LogPowerSeries` is ``P(t) + ln(t) Q(t)`` with ``P`` and ``Q`` of
the same order; it is only defined for ``t > 0``.

All values are immutable.  Binary operations that need a common order pad
the shorter operand with zeros, except :func:`combine`, which insists on
matching orders so that truncation mistakes surface early.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class SeriesError(ValueError):
    pass


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise SeriesError(f"dilation factor must lie in (0,1), got {alpha!r}")


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        values = tuple(float(c) for c in coeffs)
        if not values:
            raise SeriesError("a power series needs at least one coefficient")
        if not all(math.isfinite(c) for c in values):
            raise SeriesError("power series coefficients must be finite")
        object.__setattr__(self, "coeffs", values)

    @classmethod
    def zeros(cls, order: int) -> "PowerSeries":
        return cls([0.0] * (order + 1))

    @classmethod
    def monomial(cls, power: int, order: int | None = None, scale: float = 1.0) -> "PowerSeries":
        order = power if order is None else order
        c = [0.0] * (order + 1)
        if power <= order:
            c[power] = scale
        return cls(c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)

    def with_order(self, order: int) -> "PowerSeries":
        """Pad with zeros or truncate to ``order``."""
        c = list(self.coeffs[: order + 1])
        c.extend([0.0] * (order + 1 - len(c)))
        return PowerSeries(c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __getitem__(self, i: int) -> float:
        return self.coeffs[i] if 0 <= i <= self.order else 0.0

    def __call__(self, t):
        return evaluate(self, t)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = max(self.order, other.order)
        return combine(1.0, self.with_order(n), 1.0, other.with_order(n))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = max(self.order, other.order)
        return combine(1.0, self.with_order(n), -1.0, other.with_order(n))

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-c for c in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return multiply(self, other)
        return PowerSeries(float(other) * c for c in self.coeffs)

    __rmul__ = __mul__


@dataclass(frozen=True)
class LogPowerSeries:
    """``P(t) + ln(t) Q(t)``.

    ``overflow`` records the largest coefficient magnitude discarded by the
    last truncation that produced this value (see ``operator.apply_to_series``);
    it does not take part in equality.
    """

    P: PowerSeries
    Q: PowerSeries
    overflow: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.P.order != self.Q.order:
            raise SeriesError(
                f"log series parts must share an order, got {self.P.order} and {self.Q.order}"
            )

    @classmethod
    def from_series(cls, x: PowerSeries) -> "LogPowerSeries":
        return cls(x, PowerSeries.zeros(x.order))

    @property
    def order(self) -> int:
        return self.P.order

    def with_order(self, order: int) -> "LogPowerSeries":
        return LogPowerSeries(self.P.with_order(order), self.Q.with_order(order))

    def __call__(self, t):
        return lps_eval(self, t)


def combine(a: float, x: PowerSeries, b: float, y: PowerSeries) -> PowerSeries:
    """Coefficient-wise ``a*x + b*y``; orders must agree."""
    if x.order != y.order:
        raise SeriesError(f"order mismatch: {x.order} vs {y.order}")
    return PowerSeries(a * xi + b * yi for xi, yi in zip(x.coeffs, y.coeffs))


def integrate_from_zero(x: PowerSeries) -> PowerSeries:
    """Antiderivative vanishing at 0; the order grows by one."""
    return PowerSeries([0.0] + [c / (i + 1) for i, c in enumerate(x.coeffs)])


def dilate(x: PowerSeries, alpha: float) -> PowerSeries:
    """The series of ``t -> x(alpha t)``."""
    _check_alpha(alpha)
    out, scale = [], 1.0
    for c in x.coeffs:
        out.append(c * scale)
        scale *= alpha
    return PowerSeries(out)


def multiply(x: PowerSeries, y: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at ``max(x.order, y.order)``."""
    n = max(x.order, y.order)
    full = np.convolve(x.array(), y.array())
    return PowerSeries(full[: n + 1]).with_order(n)


def shift(x: PowerSeries, k: int) -> PowerSeries:
    """Multiply by ``t**k``; the order grows by ``k``."""
    return PowerSeries([0.0] * k + list(x.coeffs))


def evaluate(x: PowerSeries, t):
    """Horner evaluation; ``t`` may be a scalar or an array."""
    t = np.asarray(t, dtype=float)
    acc = np.zeros_like(t)
    for c in reversed(x.coeffs):
        acc = acc * t + c
    return float(acc) if acc.ndim == 0 else acc


def lps_eval(x: LogPowerSeries, t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise SeriesError("log series are only defined for t > 0")
    p = evaluate(x.P, t)
    if x.Q.is_zero():
        return p
    return p + np.log(t) * evaluate(x.Q, t)


def lps_integrate_from_zero(x: LogPowerSeries) -> LogPowerSeries:
    """Antiderivative from 0, using
    ``int_0^t s^i ln s ds = t^(i+1) ln t/(i+1) - t^(i+1)/(i+1)^2``."""
    P = integrate_from_zero(x.P)
    Q = integrate_from_zero(x.Q)
    correction = PowerSeries([0.0] + [-c / (i + 1) ** 2 for i, c in enumerate(x.Q.coeffs)])
    return LogPowerSeries(P + correction, Q)


def lps_dilate(x: LogPowerSeries, alpha: float) -> LogPowerSeries:
    # ln(alpha t) = ln t + ln alpha
    _check_alpha(alpha)
    Qd = dilate(x.Q, alpha)
    return LogPowerSeries(combine(1.0, dilate(x.P, alpha), math.log(alpha), Qd), Qd)


def lps_combine(a: float, x: LogPowerSeries, b: float, y: LogPowerSeries) -> LogPowerSeries:
    return LogPowerSeries(combine(a, x.P, b, y.P), combine(a, x.Q, b, y.Q))


def lps_multiply(poly: PowerSeries, x: LogPowerSeries) -> LogPowerSeries:
    """Multiply by a (log-free) polynomial, truncating at the larger order."""
    n = max(poly.order, x.order)
    return LogPowerSeries(multiply(poly, x.P.with_order(n)), multiply(poly, x.Q.with_order(n)))


def lps_shift(x: LogPowerSeries, k: int) -> LogPowerSeries:
    return LogPowerSeries(shift(x.P, k), shift(x.Q, k))


def as_series(values: Sequence[float] | PowerSeries) -> PowerSeries:
    return values if isinstance(values, PowerSeries) else PowerSeries(values)
