"""Potentials sampled on rectilinear grids.

Cubic interpolation (the default) builds a tensor-product not-a-knot spline
so that gradient, Hessian and Laplacian come from the interpolant's own
derivatives.  Linear interpolation is accepted but provides no second
derivatives, which makes it unusable for anything needing the Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import DomainError
from .geometry import Box
from .potentials import Potential

__all__ = ["GridPotential", "make_grid_potential", "load_grid_potential", "write_grid_csv"]


def _ders_basis(t: np.ndarray, k: int, x: np.ndarray, nd: int):
    """Nonzero B-spline basis functions and derivatives at each x.

    Returns (span, ders) with ders of shape (len(x), nd+1, k+1): the
    standard triangular-table recursion, vectorized over points.
    """
    x = np.asarray(x, dtype=float)
    m = len(x)
    n = len(t) - k - 1
    span = np.clip(np.searchsorted(t, x, side="right") - 1, k, n - 1)

    ndu = np.zeros((m, k + 1, k + 1))
    ndu[:, 0, 0] = 1.0
    left = np.zeros((m, k + 1))
    right = np.zeros((m, k + 1))
    for j in range(1, k + 1):
        left[:, j] = x - t[span + 1 - j]
        right[:, j] = t[span + j] - x
        saved = np.zeros(m)
        for r in range(j):
            ndu[:, j, r] = right[:, r + 1] + left[:, j - r]
            temp = ndu[:, r, j - 1] / ndu[:, j, r]
            ndu[:, r, j] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        ndu[:, j, j] = saved

    ders = np.zeros((m, nd + 1, k + 1))
    ders[:, 0, :] = ndu[:, :, k]
    for r in range(k + 1):
        s1, s2 = 0, 1
        a = np.zeros((m, 2, k + 1))
        a[:, 0, 0] = 1.0
        for order in range(1, nd + 1):
            d = np.zeros(m)
            rk = r - order
            pk = k - order
            if r >= order:
                a[:, s2, 0] = a[:, s1, 0] / ndu[:, pk + 1, rk]
                d = a[:, s2, 0] * ndu[:, rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = order - 1 if (r - 1) <= pk else k - r
            for j in range(j1, j2 + 1):
                a[:, s2, j] = (a[:, s1, j] - a[:, s1, j - 1]) / ndu[:, pk + 1, rk + j]
                d = d + a[:, s2, j] * ndu[:, rk + j, pk]
            if r <= pk:
                a[:, s2, order] = -a[:, s1, order - 1] / ndu[:, pk + 1, r]
                d = d + a[:, s2, order] * ndu[:, r, pk]
            ders[:, order, r] = d
            s1, s2 = s2, s1

    fac = float(k)
    for order in range(1, nd + 1):
        ders[:, order, :] *= fac
        fac *= k - order
    return span, ders


@dataclass(frozen=True)
class GridPotential(Potential):
    """Interpolant of u samples on a rectilinear grid (d = 2 or 3)."""

    axes: tuple[np.ndarray, ...]
    values: np.ndarray
    order: int
    source: str | None = None
    smoothness: str = "C2"

    # spline data, filled in by make_grid_potential
    _knots: tuple[np.ndarray, ...] = ()
    _coeffs: np.ndarray | None = None

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def domain(self) -> Box:
        # evaluators are defined on the open interior only
        return Box.make([ax[0] for ax in self.axes], [ax[-1] for ax in self.axes])

    @property
    def name(self) -> str | None:  # type: ignore[override]
        return self.source

    def spec_string(self) -> str | None:
        return f"grid:{self.source}:{self.order}" if self.source else None

    # -- evaluation helpers -------------------------------------------------

    def _check_interior(self, x: np.ndarray):
        for i, ax in enumerate(self.axes):
            xi = x[..., i]
            if np.any(xi <= ax[0]) or np.any(xi >= ax[-1]):
                raise DomainError(
                    f"grid potential evaluated outside the open interior on axis {i}")

    def _tensor_eval(self, x: np.ndarray, orders: tuple[int, ...]) -> np.ndarray:
        flat = x.reshape(-1, self.d)
        per_axis = []
        blocks = self._coeffs
        idx = []
        for i in range(self.d):
            span, ders = _ders_basis(self._knots[i], 3, flat[:, i], max(orders))
            per_axis.append(ders)
            idx.append(span[:, None] - 3 + np.arange(4)[None, :])
        if self.d == 2:
            block = blocks[idx[0][:, :, None], idx[1][:, None, :]]
            out = np.einsum("mi,mj,mij->m",
                            per_axis[0][:, orders[0], :],
                            per_axis[1][:, orders[1], :], block)
        else:
            block = blocks[idx[0][:, :, None, None],
                           idx[1][:, None, :, None],
                           idx[2][:, None, None, :]]
            out = np.einsum("mi,mj,mk,mijk->m",
                            per_axis[0][:, orders[0], :],
                            per_axis[1][:, orders[1], :],
                            per_axis[2][:, orders[2], :], block)
        return out.reshape(x.shape[:-1])

    def _linear_eval(self, x: np.ndarray, orders: tuple[int, ...]) -> np.ndarray:
        flat = x.reshape(-1, self.d)
        weights = []
        idx = []
        for i in range(self.d):
            ax = self.axes[i]
            j = np.clip(np.searchsorted(ax, flat[:, i]) - 1, 0, len(ax) - 2)
            h = ax[j + 1] - ax[j]
            th = (flat[:, i] - ax[j]) / h
            if orders[i] == 0:
                w = np.stack([1.0 - th, th], axis=1)
            else:
                w = np.stack([-1.0 / h, 1.0 / h], axis=1)
            weights.append(w)
            idx.append(j[:, None] + np.arange(2)[None, :])
        if self.d == 2:
            block = self.values[idx[0][:, :, None], idx[1][:, None, :]]
            out = np.einsum("mi,mj,mij->m", weights[0], weights[1], block)
        else:
            block = self.values[idx[0][:, :, None, None],
                                idx[1][:, None, :, None],
                                idx[2][:, None, None, :]]
            out = np.einsum("mi,mj,mk,mijk->m",
                            weights[0], weights[1], weights[2], block)
        return out.reshape(x.shape[:-1])

    def _eval(self, x: np.ndarray, orders: tuple[int, ...]) -> np.ndarray:
        if self.order == 3:
            return self._tensor_eval(x, orders)
        return self._linear_eval(x, orders)

    # -- Potential API -------------------------------------------------

    def u(self, x):
        x = np.asarray(x, dtype=float)
        self._check_interior(x)
        v = self._eval(x, (0,) * self.d)
        return v if v.shape else float(v)

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        self._check_interior(x)
        out = np.empty_like(x)
        for i in range(self.d):
            orders = tuple(1 if j == i else 0 for j in range(self.d))
            out[..., i] = self._eval(x, orders)
        return out

    def hessian(self, x):
        if self.order == 1:
            raise DomainError(
                "order-1 grid potentials provide no second derivatives; "
                "resample with order=3")
        x = np.asarray(x, dtype=float)
        self._check_interior(x)
        d = self.d
        out = np.empty(x.shape[:-1] + (d, d), dtype=float)
        for i in range(d):
            for j in range(i, d):
                orders = tuple((1 if m == i else 0) + (1 if m == j else 0)
                               for m in range(d))
                v = self._eval(x, orders)
                out[..., i, j] = v
                out[..., j, i] = v
        return out


def make_grid_potential(axes, values, order: int = 3,
                        source: str | None = None) -> GridPotential:
    """Build a grid potential from per-axis node vectors and u samples.

    `axes` are strictly increasing 1-D arrays (2 or 3 of them), `values`
    has the matching shape, and `order` is 1 (multilinear) or 3 (tensor
    cubic spline, not-a-knot ends).
    """
    axes = tuple(np.asarray(a, dtype=float) for a in axes)
    values = np.asarray(values, dtype=float)
    if len(axes) not in (2, 3):
        raise DomainError("grid potentials support d in {2, 3}")
    if values.shape != tuple(len(a) for a in axes):
        raise DomainError("sample shape does not match the axes")
    if not np.all(np.isfinite(values)):
        raise DomainError("grid samples must be finite")
    for a in axes:
        if len(a) < 4 or np.any(np.diff(a) <= 0):
            raise DomainError("each axis needs >= 4 strictly increasing nodes")
    if order not in (1, 3):
        raise DomainError("interpolation order must be 1 or 3")

    knots: tuple[np.ndarray, ...] = ()
    coeffs = None
    if order == 3:
        coeffs = values.copy()
        klist = []
        for i, a in enumerate(axes):
            spl = make_interp_spline(a, coeffs, k=3, axis=i)
            coeffs = np.asarray(spl.c)
            klist.append(spl.t.copy())
        knots = tuple(klist)
    return GridPotential(axes, values, order, source=source,
                         smoothness="C2" if order == 3 else "C0",
                         _knots=knots, _coeffs=coeffs)


def load_grid_potential(path: str | Path, order: int = 3) -> GridPotential:
    """Read `x,y[,z],u` CSV (rectilinear, lexicographically sorted)."""
    path = Path(path)
    if not path.exists():
        raise DomainError(f"grid file not found: {path}")
    with open(path) as fh:
        header = fh.readline().strip().lower().split(",")
        if header not in (["x", "y", "u"], ["x", "y", "z", "u"]):
            raise DomainError("grid CSV header must be x,y[,z],u")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    d = len(header) - 1
    if data.shape[1] != d + 1:
        raise DomainError("grid CSV column count does not match header")
    axes = tuple(np.unique(data[:, i]) for i in range(d))
    shape = tuple(len(a) for a in axes)
    if int(np.prod(shape)) != data.shape[0]:
        raise DomainError("grid CSV is not a full rectilinear lattice")
    expect = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    if not np.array_equal(expect, data[:, :d]):
        raise DomainError("grid CSV must be sorted lexicographically by x,y[,z]")
    values = data[:, d].reshape(shape)
    return GridPotential and make_grid_potential(axes, values, order=order,
                                                 source=str(path))


def write_grid_csv(path: str | Path, axes, values):
    """Write samples in the `x,y[,z],u` format accepted by the loader."""
    axes = tuple(np.asarray(a, dtype=float) for a in axes)
    values = np.asarray(values, dtype=float)
    d = len(axes)
    header = ["x", "y", "z"][:d] + ["u"]
    nodes = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row, v in zip(nodes, values.ravel()):
            fh.write(",".join(repr(float(c)) for c in row) + f",{float(v)!r}\n")
