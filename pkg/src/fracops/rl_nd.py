"""Multidimensional fractional integrals and box-truncated convolutions.

The multi-order integral factorizes across axes, so it is realized as
tensorized 1D sweeps (O(N^(n+1)) instead of O(N^(2n)) for an nD kernel
quadrature). A zero component skips its axis entirely. Truncated
convolutions use plain tensorized trapezoid weights; the kernels fed to
them are nonsingular.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .grid import BoxGridND, SampledFunctionND, l1_distance_nd
from .rl_core import _apply_weights, product_quadrature_weights

MultiOrder = tuple[float, ...]


def check_multi_order(alpha: Sequence[float], dim: int) -> MultiOrder:
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != dim:
        raise ValueError(f"order has {len(alpha)} components but the grid is {dim}D")
    for a in alpha:
        if not math.isfinite(a) or a < 0.0:
            raise ValueError(f"order components must be finite and >= 0, got {a}")
    return alpha


def rl_integral_nd(alpha: Sequence[float], f: SampledFunctionND) -> SampledFunctionND:
    """Apply the 1D fractional integral along each axis j with order alpha_j.

    Axes with alpha_j = 0 are left untouched; with all components zero the
    input values are returned unchanged. Sweeps are applied in axis order,
    but the output is axis-order independent up to rounding (the sweeps
    commute).
    """
    alpha = check_multi_order(alpha, f.grid.dim)
    values = f.values
    for axis, a in enumerate(alpha):
        if a == 0.0:
            continue
        g = f.grid.axes[axis]
        wl, wr = product_quadrature_weights(a, g.h, g.N)
        moved = np.moveaxis(values, axis, -1)
        moved = _apply_weights(np.ascontiguousarray(moved), wl, wr)
        values = np.moveaxis(moved, -1, axis)
    return SampledFunctionND(f.grid, values)


def _corner_at_zero(grid: BoxGridND) -> None:
    if any(g.a != 0.0 for g in grid.axes):
        raise ValueError(f"truncated convolution requires left corner 0, got {grid.corner}")


def truncated_convolution(h: SampledFunctionND, f: SampledFunctionND) -> SampledFunctionND:
    """Box-truncated convolution (R_h f)(t) = integral over [0, t] of h(s) f(t-s) ds.

    Tensorized trapezoid weights on [0, t] per output node t; output is 0 on
    the lower faces (degenerate boxes).
    """
    if h.grid != f.grid:
        raise ValueError("kernel and function must share a grid")
    _corner_at_zero(h.grid)
    grid = h.grid
    dim = grid.dim
    base = []
    for g in grid.axes:
        w = np.full(g.N + 1, g.h)
        w[0] = 0.5 * g.h
        base.append(w)
    out = np.zeros(grid.shape, dtype=np.complex128)
    for m in np.ndindex(*grid.shape):
        if any(mi == 0 for mi in m):
            continue
        wvec = []
        for j, mi in enumerate(m):
            w = base[j][: mi + 1].copy()
            w[-1] = 0.5 * grid.axes[j].h
            wvec.append(w)
        weight = wvec[0]
        for w in wvec[1:]:
            weight = np.multiply.outer(weight, w)
        hblock = h.values[tuple(slice(0, mi + 1) for mi in m)]
        fblock = f.values[tuple(slice(mi, None, -1) for mi in m)]
        out[m] = np.sum(weight * hblock * fblock)
    return SampledFunctionND(grid, out)


def commutation_residual(
    alpha: Sequence[float], h: SampledFunctionND, f: SampledFunctionND
) -> float:
    """L1 distance between integrating then convolving and the reverse order."""
    lhs = rl_integral_nd(alpha, truncated_convolution(h, f))
    rhs = truncated_convolution(h, rl_integral_nd(alpha, f))
    return l1_distance_nd(lhs, rhs)
