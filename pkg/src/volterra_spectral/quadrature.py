"""Composite Gauss-Legendre rules."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

GL_POINTS = 8


@lru_cache(maxsize=None)
def gauss_legendre(n: int = GL_POINTS) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_points(breaks: np.ndarray, n: int = GL_POINTS) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and weights for each panel ``[breaks[k], breaks[k+1]]``.

    ``breaks`` may carry leading batch axes; the result has shape
    ``breaks.shape[:-1] + (breaks.shape[-1] - 1, n)``.  Weights carry the sign
    of the panel orientation, so reversed breakpoints integrate backwards.
    """
    x, w = gauss_legendre(n)
    breaks = np.asarray(breaks, dtype=float)
    lo, hi = breaks[..., :-1, None], breaks[..., 1:, None]
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def composite_gauss_legendre(func, a: float, b: float, panels: int = 1, n: int = GL_POINTS) -> float:
    """Integrate a vectorised ``func`` over ``[a, b]`` with equal panels."""
    s, w = panel_points(np.linspace(a, b, panels + 1), n)
    return float(np.sum(w * func(s)))


def graded_breaks(t: np.ndarray, levels: int = 48, split: int = 2) -> np.ndarray:
    """Breakpoints from 0 to each ``t``, refined geometrically towards 0.

    Row ``j`` runs ``0, t_j 2^-levels, ..., t_j/2, t_j`` with every dyadic
    interval split into ``split`` equal pieces.  Integrands with an
    integrable ``ln s`` singularity at the origin are resolved to near
    machine precision.
    """
    t = np.asarray(t, dtype=float)
    dyadic = 2.0 ** -np.arange(levels, -1, -1.0)
    pieces = [dyadic[:1]]
    for lo, hi in zip(dyadic[:-1], dyadic[1:]):
        pieces.append(np.linspace(lo, hi, split + 1)[1:])
    unit = np.concatenate([[0.0], *pieces])
    return t[:, None] * unit[None, :]
