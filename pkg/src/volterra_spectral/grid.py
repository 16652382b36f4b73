"""Sampled functions on a node set with piecewise-cubic interpolation."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .quadrature import GL_POINTS, panel_points

INTERPOLATION_RULES = ("not-a-knot", "natural")


def signed_power(t, n: int, eps: float):
    """``t**n * |t|**eps``, the real continuation of ``t**(n+eps)``."""
    t = np.asarray(t, dtype=float)
    return t**n * np.abs(t) ** eps


def uniform_nodes(T: float, size: int, symmetric: bool = False) -> np.ndarray:
    """``size`` equispaced nodes on ``[0, T]``; on ``[-T, T]`` the spacing is kept
    and the node count becomes ``2*size - 1`` so that 0 stays a node."""
    if symmetric:
        return np.linspace(-T, T, 2 * size - 1)
    return np.linspace(0.0, T, size)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values on strictly increasing nodes.

    ``weight = (n, eps)`` selects weighted interpolation: the cubic spline is
    fitted to ``t**n |t|**eps * values`` and divided back out.  This keeps
    interpolation accurate for functions such as ``sqrt(t) * smooth``.
    """

    nodes: np.ndarray
    values: np.ndarray
    rule: str = "not-a-knot"
    weight: tuple[int, float] = field(default=(0, 0.0))

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        values = np.array(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be 1-D arrays of equal length")
        if nodes.size < 4:
            raise ValueError("cubic interpolation needs at least 4 nodes")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if self.rule not in INTERPOLATION_RULES:
            raise ValueError(f"unknown interpolation rule {self.rule!r}")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def weighted(self) -> bool:
        return self.weight[0] != 0 or self.weight[1] != 0.0

    @cached_property
    def _plain(self) -> CubicSpline:
        return CubicSpline(self.nodes, self.values, bc_type=self.rule)

    @cached_property
    def _spline(self) -> CubicSpline:
        if not self.weighted:
            return self._plain
        return CubicSpline(self.nodes, self.weighted_values(), bc_type=self.rule)

    def weighted_values(self) -> np.ndarray:
        return signed_power(self.nodes, *self.weight) * self.values

    def weighted_interpolant(self, t):
        """Interpolant of ``t**n |t|**eps * x`` (equal to ``__call__`` when unweighted)."""
        return self._spline(np.asarray(t, dtype=float))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.nodes[0], self.nodes[-1]
        span = hi - lo
        if np.any((t < lo - 1e-12 * span) | (t > hi + 1e-12 * span)):
            raise ValueError("evaluation point outside the grid hull")
        if not self.weighted:
            return self._plain(t)
        w = signed_power(t, *self.weight)
        safe = np.where(w != 0.0, w, 1.0)
        return np.where(w != 0.0, self._spline(t) / safe, self._plain(t))

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.nodes, values, self.rule, self.weight)

    def cumulative_moments(self, max_power: int, n: int = GL_POINTS) -> np.ndarray:
        """``M[q, j] = int_0^{t_j} s**q * u(s) ds`` for the weighted interpolant ``u``.

        One Gauss-Legendre panel per node interval; zero must be a node or
        lie outside the grid on the left.
        """
        s, w = panel_points(self.nodes, n)
        u = self._spline(s)
        powers = s[None, :, :] ** np.arange(max_power + 1)[:, None, None]
        panels = np.sum(w * powers * u, axis=2)
        cum = np.concatenate([np.zeros((max_power + 1, 1)), np.cumsum(panels, axis=1)], axis=1)
        zero = self.zero_index()
        return cum - cum[:, zero : zero + 1]

    def zero_index(self) -> int:
        idx = np.flatnonzero(self.nodes == 0.0)
        if idx.size != 1:
            raise ValueError("grid must contain t = 0 as a node")
        return int(idx[0])
