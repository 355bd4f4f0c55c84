"""Uniform grids and sampled functions, the common currency of all operators.

Grids are node-inclusive: a grid with N subintervals carries N+1 values,
both endpoints present. Values are stored as complex128 throughout, with an
``is_real`` flag when every imaginary part is exactly zero.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class UniformGrid1D:
    """Nodes t_k = a + k*h, k = 0..N, with h = (T - a)/N."""

    a: float
    T: float
    N: int

    def __post_init__(self):
        if not (self.a < self.T):
            raise ValueError(f"grid requires a < T, got a={self.a}, T={self.T}")
        if self.N < 1 or self.N != int(self.N):
            raise ValueError(f"grid requires a positive integer N, got {self.N}")

    @property
    def h(self) -> float:
        return (self.T - self.a) / self.N

    @property
    def nodes(self) -> np.ndarray:
        return self.a + self.h * np.arange(self.N + 1)


@dataclass(frozen=True)
class SampledFunction1D:
    grid: UniformGrid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.N + 1,):
            raise ValueError(
                f"expected {self.grid.N + 1} values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", _freeze(vals))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0.0))

    @property
    def real_values(self) -> np.ndarray:
        if not self.is_real:
            raise ValueError("sampled function has nonzero imaginary parts")
        return self.values.real

    def __add__(self, other: "SampledFunction1D") -> "SampledFunction1D":
        _require_same_grid(self, other)
        return SampledFunction1D(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledFunction1D") -> "SampledFunction1D":
        _require_same_grid(self, other)
        return SampledFunction1D(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "SampledFunction1D":
        return SampledFunction1D(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class BoxGridND:
    """Product of 1D grids over a box, n in {1, 2, 3}."""

    axes: tuple[UniformGrid1D, ...]

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 3:
            raise ValueError(f"box grids support 1..3 axes, got {len(axes)}")
        object.__setattr__(self, "axes", axes)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(g.N + 1 for g in self.axes)

    @property
    def corner(self) -> tuple[float, ...]:
        return tuple(g.a for g in self.axes)


@dataclass(frozen=True)
class SampledFunctionND:
    grid: BoxGridND
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            raise ValueError(
                f"expected tensor of shape {self.grid.shape}, got {vals.shape}"
            )
        object.__setattr__(self, "values", _freeze(vals))

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0.0))


def _require_same_grid(f: SampledFunction1D, g: SampledFunction1D) -> None:
    if f.grid != g.grid:
        raise ValueError(f"grid mismatch: {f.grid} vs {g.grid}")


def sample(expr: Callable[[float], complex], grid: UniformGrid1D) -> SampledFunction1D:
    """Evaluate ``expr`` at every node; rejects non-finite values by node index."""
    nodes = grid.nodes
    vals = np.array([complex(expr(t)) for t in nodes], dtype=np.complex128)
    bad = np.nonzero(~np.isfinite(vals.real) | ~np.isfinite(vals.imag))[0]
    if bad.size:
        k = int(bad[0])
        raise ValueError(f"non-finite sample at node index {k} (t={nodes[k]})")
    return SampledFunction1D(grid, vals)


def sample_nd(expr: Callable[..., complex], grid: BoxGridND) -> SampledFunctionND:
    mesh = np.meshgrid(*[g.nodes for g in grid.axes], indexing="ij")
    vals = np.vectorize(expr, otypes=[np.complex128])(*mesh)
    if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
        idx = np.argwhere(~(np.isfinite(vals.real) & np.isfinite(vals.imag)))[0]
        raise ValueError(f"non-finite sample at node index {tuple(idx)}")
    return SampledFunctionND(grid, vals)


def cumulative_trapezoid(f: SampledFunction1D) -> SampledFunction1D:
    """Cumulative integral from the left endpoint by the composite trapezoid rule."""
    w = 0.5 * f.grid.h
    inc = w * f.values[:-1] + w * f.values[1:]
    out = np.zeros(f.grid.N + 1, dtype=np.complex128)
    out[1:] = np.cumsum(inc)
    return SampledFunction1D(f.grid, out)


def l1_norm(f: SampledFunction1D) -> float:
    """Trapezoid rule applied to |f| over the grid."""
    mod = np.abs(f.values)
    h = f.grid.h
    return float(h * (0.5 * mod[0] + mod[1:-1].sum() + 0.5 * mod[-1]))


def l1_distance(f: SampledFunction1D, g: SampledFunction1D) -> float:
    _require_same_grid(f, g)
    return l1_norm(f - g)


def linf_distance(f: SampledFunction1D, g: SampledFunction1D) -> float:
    """Max over nodes of the complex modulus of f - g."""
    _require_same_grid(f, g)
    return float(np.max(np.abs(f.values - g.values)))


def _axis_trapezoid_weights(g: UniformGrid1D) -> np.ndarray:
    w = np.full(g.N + 1, g.h)
    w[0] = 0.5 * g.h
    w[-1] = 0.5 * g.h
    return w


def l1_norm_nd(f: SampledFunctionND) -> float:
    """Tensorized trapezoid rule applied to |f| over the box."""
    acc = np.abs(f.values)
    for axis in range(f.grid.dim - 1, -1, -1):
        w = _axis_trapezoid_weights(f.grid.axes[axis])
        acc = np.tensordot(acc, w, axes=([axis], [0]))
    return float(acc)


def l1_distance_nd(f: SampledFunctionND, g: SampledFunctionND) -> float:
    if f.grid != g.grid:
        raise ValueError("grid mismatch between ND sampled functions")
    return l1_norm_nd(SampledFunctionND(f.grid, f.values - g.values))


def dump_csv(f: SampledFunction1D, path: str) -> None:
    """Write ``t,re,im`` rows, one per node, in round-trip precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im"])
        for t, v in zip(f.grid.nodes, f.values):
            writer.writerow([format(t, ".17g"), format(v.real, ".17g"), format(v.imag, ".17g")])


def load_csv(path: str) -> SampledFunction1D:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "re", "im"]:
        raise ValueError(f"{path}: expected header 't,re,im'")
    ts = np.array([float(r[0]) for r in rows[1:]])
    vals = np.array([complex(float(r[1]), float(r[2])) for r in rows[1:]])
    n = len(ts) - 1
    grid = UniformGrid1D(float(ts[0]), float(ts[-1]), n)
    return SampledFunction1D(grid, vals)


def dump_csv_nd(f: SampledFunctionND, path: str) -> None:
    """Row-major flattened dump with a header recording per-axis extents."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        shape = ",".join(str(s) for s in f.grid.shape)
        a = ",".join(format(g.a, ".17g") for g in f.grid.axes)
        T = ",".join(format(g.T, ".17g") for g in f.grid.axes)
        writer.writerow([f"# shape={shape} a={a} T={T}"])
        writer.writerow(["re", "im"])
        for v in f.values.ravel(order="C"):
            writer.writerow([format(v.real, ".17g"), format(v.imag, ".17g")])


def load_csv_nd(path: str) -> SampledFunctionND:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0][0]
    if not header.startswith("# shape="):
        raise ValueError(f"{path}: missing tensor header")
    fields = dict(part.split("=") for part in header[2:].split(" "))
    shape = tuple(int(s) for s in fields["shape"].split(","))
    avals = [float(s) for s in fields["a"].split(",")]
    tvals = [float(s) for s in fields["T"].split(",")]
    axes = tuple(
        UniformGrid1D(avals[i], tvals[i], shape[i] - 1) for i in range(len(shape))
    )
    vals = np.array(
        [complex(float(r[0]), float(r[1])) for r in rows[2:]], dtype=np.complex128
    ).reshape(shape, order="C")
    return SampledFunctionND(BoxGridND(axes), vals)
